"""The iterated polynomials f_i, the modified Mahler basis and its change-of-basis matrices."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable

from .padic import INF, digits, vp_factorial, vp_int, vp_rat
from .verdict import Verdict

__all__ = [
    "RatPoly",
    "BasisMatrixEntry",
    "f_poly",
    "m_poly",
    "m_value",
    "mahler_B",
    "B_check",
    "m_poly_check",
    "Y_column",
    "Y_entry",
    "Y_bound",
    "Y_bound_check",
    "Y_inverse",
    "Y_inverse_bound_check",
    "integrality_check",
    "leading_valuation",
]


@dataclass(frozen=True)
class RatPoly:
    """Dense polynomial with rational coefficients, constant term first."""

    coeffs: tuple[Fraction, ...]

    @classmethod
    def make(cls, coeffs: Iterable) -> "RatPoly":
        c = [Fraction(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        return cls(tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def terms(self) -> dict[int, Fraction]:
        return {i: c for i, c in enumerate(self.coeffs) if c}

    def coeff(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __mul__(self, other: "RatPoly") -> "RatPoly":
        if not self.coeffs or not other.coeffs:
            return RatPoly(())
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] += a * b
        return RatPoly.make(out)

    def __sub__(self, other: "RatPoly") -> "RatPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return RatPoly.make(self.coeff(i) - other.coeff(i) for i in range(n))

    def scale(self, c) -> "RatPoly":
        c = Fraction(c)
        return RatPoly.make(x * c for x in self.coeffs)

    def __pow__(self, e: int) -> "RatPoly":
        result = RatPoly((Fraction(1),))
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __call__(self, z) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc


@dataclass(frozen=True)
class BasisMatrixEntry:
    m: int
    n: int
    value: Fraction


_Z = RatPoly((Fraction(0), Fraction(1)))


@lru_cache(maxsize=None)
def f_poly(p: int, i: int) -> RatPoly:
    if i < 1:
        raise ValueError("f_i is defined for i >= 1")
    prev = _Z if i == 1 else f_poly(p, i - 1)
    return ((prev**p) - prev).scale(Fraction(1, p))


@lru_cache(maxsize=4096)
def m_poly(p: int, n: int) -> RatPoly:
    """z^(n_0) f_1^(n_1) f_2^(n_2) ... for the base-p digits n_i of n."""
    ds = digits(n, p)
    out = RatPoly((Fraction(1),))
    for i, d in enumerate(ds):
        if d:
            out = out * ((_Z if i == 0 else f_poly(p, i)) ** d)
    return out


def leading_valuation(p: int, n: int) -> int:
    """-sum n_i (1 + p + ... + p^(i-1))."""
    return -sum(d * (p**i - 1) // (p - 1) for i, d in enumerate(digits(n, p)))


def m_value(p: int, n: int, z: int) -> int:
    """m_n(z) for an integer z, through integer recursion (f_i(z) stays integral)."""
    out = z ** (digits(n, p)[0] if n else 0)
    f = z
    for d in digits(n, p)[1:]:
        f = (f**p - f) // p
        out *= f**d
    return out


def mahler_B(p: int, n: int) -> list[int]:
    """[B_(0,n), ..., B_(n,n)]: forward differences of m_n at 0."""
    vals = [m_value(p, n, z) for z in range(n + 1)]
    out = []
    for m in range(n + 1):
        out.append(sum((-1) ** (m - j) * comb(m, j) * vals[j] for j in range(m + 1)))
    return out


def B_check(p: int, n: int) -> Verdict:
    col = mahler_B(p, n)
    if vp_int(col[n], p) != 0:
        return Verdict.failed("diagonal entry is not a unit", n=n, value=col[n])
    return Verdict.passed(n=n)


def m_poly_check(p: int, n: int) -> Verdict:
    """Degree, exponent congruence and leading valuation of m_n."""
    poly = m_poly(p, n)
    if poly.degree != n:
        return Verdict.failed("degree", n=n, degree=poly.degree)
    bad = [e for e in poly.terms() if (n - e) % (p - 1)]
    if bad:
        return Verdict.failed("exponent congruence", n=n, exponent=min(bad))
    v = vp_rat(poly.coeff(n), p)
    if v != leading_valuation(p, n):
        return Verdict.failed("leading valuation", n=n, valuation=v)
    return Verdict.passed(n=n)


def Y_column(p: int, n: int) -> list[BasisMatrixEntry]:
    """Nonzero entries Y_(m,n), m = 0..n."""
    return [BasisMatrixEntry(m, n, c) for m, c in sorted(m_poly(p, n).terms().items())]


def Y_entry(p: int, m: int, n: int) -> Fraction:
    """Coefficient of z^m in m_n."""
    if m > n:
        raise ValueError("need m <= n")
    return m_poly(p, n).coeff(m)


def Y_bound(p: int, m: int, n: int) -> int:
    return -vp_factorial(m, p) + m // p - n // p - (n - m) // (p * p - p)


def Y_bound_check(p: int, m: int, n: int) -> Verdict:
    y = Y_entry(p, m, n)
    key = {"p": p, "m": m, "n": n}
    if (n - m) % (p - 1) and y != 0:
        return Verdict.failed("degree congruence", **key)
    v = vp_rat(y, p)
    bound = Y_bound(p, m, n)
    if v is not INF and v < bound:
        return Verdict.failed(valuation=v, bound=bound, **key)
    if m == n and vp_rat(y, p) + vp_factorial(n, p) != 0:
        return Verdict.failed("diagonal is not (n!)^-1 times a unit", **key)
    return Verdict.passed(valuation=v, bound=bound, **key)


def Y_inverse(p: int, nmax: int) -> list[list[Fraction]]:
    """Inverse of the upper triangular Y restricted to indices 0..nmax."""
    N = nmax + 1
    Y = [[Y_entry(p, i, j) if i <= j else Fraction(0) for j in range(N)] for i in range(N)]
    inv = [[Fraction(0)] * N for _ in range(N)]
    for j in range(N):
        inv[j][j] = 1 / Y[j][j]
        for i in range(j - 1, -1, -1):
            acc = Fraction(0)
            for t in range(i + 1, j + 1):
                if Y[i][t] and inv[t][j]:
                    acc += Y[i][t] * inv[t][j]
            inv[i][j] = -acc / Y[i][i]
    return inv


def Y_inverse_bound_check(p: int, nmax: int) -> Verdict:
    inv = Y_inverse(p, nmax)
    for n in range(nmax + 1):
        for m in range(n + 1):
            v = vp_rat(inv[m][n], p)
            bound = vp_factorial(n, p) + m // p - n // p - (n - m) // (p * p - p)
            if v is not INF and v < bound:
                return Verdict.failed(m=m, n=n, valuation=v, bound=bound)
    return Verdict.passed(p=p, nmax=nmax)


def integrality_check(p: int, n: int, sample_count: int = 50, seed: int = 0) -> Verdict:
    """m_n takes p-integral values at integer samples."""
    poly = m_poly(p, n)
    e = 0
    while p**e < max(n, 1):
        e += 1
    top = p ** (e + 2)
    rng = random.Random(seed * 1_000_003 + n)
    samples = sorted({rng.randrange(top) for _ in range(sample_count)} | {0, p})
    for z in samples:
        v = poly(z)
        if v != 0 and vp_int(v.denominator, p) > 0:
            return Verdict.failed(n=n, z=z, value=v)
        if v != m_value(p, n, z):
            return Verdict.failed("integer recursion disagrees", n=n, z=z)
    return Verdict.passed(n=n, samples=len(samples))
