"""Valuations, base-p digits and the digit statistics built on them.

Everything here is exact.  Valuations live in ``Q`` extended by a single
``INF`` sentinel that sorts above every rational and absorbs addition.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache, total_ordering
from typing import Iterable, Sequence, Union

__all__ = [
    "INF",
    "Infinity",
    "Rat",
    "PDigits",
    "is_prime",
    "as_rat",
    "vp_int",
    "vp_rat",
    "digits",
    "dig",
    "vp_factorial",
    "vp_binomial",
    "D",
    "tuple_D",
    "tuple_DD",
    "floor_log",
    "format_rat",
    "parse_rat",
]


@total_ordering
class Infinity:
    """The valuation of zero."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __hash__(self):
        return hash("ghostslopes.INF")

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return other is not self

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __mul__(self, other):
        if other == 0:
            return Fraction(0)
        if other < 0:
            raise ArithmeticError("negative multiple of infinity")
        return self

    __rmul__ = __mul__

    def __reduce__(self):
        return (Infinity, ())


INF = Infinity()

Rat = Union[Fraction, Infinity]


def as_rat(x) -> Rat:
    if x is INF:
        return INF
    return Fraction(x)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def vp_int(n: int, p: int) -> int:
    """Exponent of ``p`` in the nonzero integer ``n``."""
    if n == 0:
        raise ValueError("vp_int(0) is infinite; use INF explicitly")
    n = abs(n)
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def vp_rat(x, p: int) -> Rat:
    x = Fraction(x)
    if x == 0:
        return INF
    return Fraction(vp_int(x.numerator, p) - vp_int(x.denominator, p))


@lru_cache(maxsize=1 << 16)
def digits(n: int, p: int) -> tuple[int, ...]:
    """Little-endian base-``p`` digits of ``n`` (empty for ``n = 0``)."""
    if n < 0:
        raise ValueError("digits of a negative integer")
    out = []
    while n:
        n, r = divmod(n, p)
        out.append(r)
    return tuple(out)


class PDigits:
    """A nonnegative integer viewed through its base-p expansion."""

    __slots__ = ("p", "digits")

    def __init__(self, n: int, p: int):
        self.p = p
        self.digits = digits(n, p)

    def __int__(self):
        return sum(d * self.p**i for i, d in enumerate(self.digits))

    def __getitem__(self, i: int) -> int:
        return self.digits[i] if 0 <= i < len(self.digits) else 0

    def __len__(self):
        return len(self.digits)

    def __repr__(self):
        return f"PDigits({int(self)}, p={self.p}, digits={list(self.digits)})"


def dig(n: int, p: int) -> int:
    """Sum of the base-p digits of ``n``."""
    return sum(digits(n, p))


def vp_factorial(n: int, p: int) -> int:
    if n < 0:
        raise ValueError("factorial of a negative integer")
    return (n - dig(n, p)) // (p - 1)


def vp_binomial(m: int, r: int, p: int) -> int:
    """Valuation of C(m, r): the carries when adding r and m - r in base p."""
    if not 0 <= r <= m:
        raise ValueError("need 0 <= r <= m")
    carries = carry = 0
    x, y = r, m - r
    while x or y or carry:
        s = x % p + y % p + carry
        carry = 1 if s >= p else 0
        carries += carry
        x //= p
        y //= p
    return carries


def D(m: int, n: int, p: int) -> int:
    """Number of indices i with n_{i+1} > m_i."""
    md, nd = digits(m, p), digits(n, p)
    count = 0
    for i in range(len(nd) - 1):
        mi = md[i] if i < len(md) else 0
        if nd[i + 1] > mi:
            count += 1
    return count


def _digit_columns(values: Sequence[int], p: int, width: int) -> list[list[int]]:
    cols = []
    for v in values:
        d = digits(v, p)
        cols.append([d[j] if j < len(d) else 0 for j in range(width)])
    return cols


def _check_sizes(lam, eta):
    if len(lam) != len(eta):
        raise ValueError(f"tuple sizes differ: {len(lam)} != {len(eta)}")


def _width(values: Iterable[int], p: int) -> int:
    return max((len(digits(v, p)) for v in values), default=0) + 2


def tuple_D(lam: Sequence[int], eta: Sequence[int], p: int) -> int:
    """Tuple statistic D on two equally long lists of degrees.

    Sums over digit positions j the positive part of
    #{lam_i with j-th digit 0} - #{eta_i with (j+1)-th digit 0}.
    """
    _check_sizes(lam, eta)
    w = _width(list(lam) + list(eta), p)
    L = _digit_columns(lam, p, w)
    E = _digit_columns(eta, p, w)
    total = 0
    for j in range(w - 1):
        a = sum(1 for row in L if row[j] == 0)
        b = sum(1 for row in E if row[j + 1] == 0)
        total += max(a - b, 0)
    return total


def tuple_DD(lam: Sequence[int], eta: Sequence[int], p: int) -> int:
    """Thresholded variant of :func:`tuple_D`, maximised over alpha in [0, p-2]."""
    _check_sizes(lam, eta)
    w = _width(list(lam) + list(eta), p)
    L = _digit_columns(lam, p, w)
    E = _digit_columns(eta, p, w)
    total = 0
    for j in range(w - 1):
        best = 0
        for alpha in range(p - 1):
            a = sum(1 for row in L if row[j] <= alpha)
            b = sum(1 for row in E if row[j + 1] <= alpha)
            best = max(best, a - b)
        total += best
    return total


def floor_log(x: int, p: int) -> int:
    """Largest e with p**e <= x, for a positive integer x."""
    if x < 1:
        raise ValueError("floor_log needs x >= 1")
    e, q = 0, p
    while q <= x:
        q *= p
        e += 1
    return e


def format_rat(x) -> str:
    """Serialise a valuation as ``num/den`` or ``inf``."""
    if x is INF:
        return "inf"
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rat(text: str) -> Rat:
    t = text.strip().lower()
    if t in ("inf", "infinity", "oo"):
        return INF
    try:
        return Fraction(t)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational: {text!r}") from exc
