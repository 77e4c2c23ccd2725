"""The local datum, the classical dimension formulas and the ghost coefficients.

A character is pinned down by ``(p, a, s_eps)``; the twist ``b`` only
relabels it.  Weights are integers ``k``; the ghost zeros of the series
attached to the context sit at ``k = k_eps + (p - 1) * kb`` with ``kb >= 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator

from .padic import is_prime

__all__ = [
    "GhostContext",
    "GhostCoefficient",
    "d_iw",
    "d_iw_self",
    "d_ur",
    "d_new",
    "kbullet",
    "weight",
    "power_basis_degree",
    "power_basis_degrees",
    "hodge_slope",
    "multiplicity",
    "ghost_coefficient",
    "ghost_degree",
    "zero_weights",
    "companion",
    "companion_relation",
]


@dataclass(frozen=True)
class GhostContext:
    """Reducible generic local datum together with a relevant character.

    ``s_eps`` selects the character ``omega^(b - s) x omega^(a + s + b)``.
    """

    p: int
    a: int
    s_eps: int = 0
    b: int = 0

    def __post_init__(self):
        p, a = self.p, self.a
        if not isinstance(p, int) or p < 5 or not is_prime(p):
            raise ValueError(f"p must be a prime >= 5, got {p!r}")
        if not 1 <= a <= p - 4:
            raise ValueError(f"a must lie in [1, p-4] = [1, {p - 4}], got {a}")
        if not 0 <= self.b <= p - 2:
            raise ValueError(f"b must lie in [0, {p - 2}], got {self.b}")
        if not 0 <= self.s_eps <= p - 2:
            raise ValueError(f"s_eps must lie in [0, {p - 2}], got {self.s_eps}")

    def mod(self, x: int) -> int:
        """Representative of x modulo p - 1 in [0, p - 2]."""
        return x % (self.p - 1)

    @cached_property
    def k_eps(self) -> int:
        return 2 + self.mod(self.a + 2 * self.s_eps)

    @cached_property
    def delta_eps(self) -> int:
        return (self.s_eps + self.mod(self.a + self.s_eps)) // (self.p - 1)

    @cached_property
    def t1(self) -> int:
        return self._t[0]

    @cached_property
    def t2(self) -> int:
        return self._t[1]

    @cached_property
    def _t(self) -> tuple[int, int]:
        a, s, d = self.a, self.s_eps, self.delta_eps
        if a + s < self.p - 1:
            return s + d, a + s + d + 2
        return self.mod(a + s) + d + 1, s + d + 1

    @property
    def very_generic(self) -> bool:
        return self.p >= 11 and 2 <= self.a <= self.p - 5

    @property
    def first_is_trivial(self) -> bool:
        """True for the character 1 x omega^a (up to the twist), where g_1 = 1."""
        return self.s_eps == 0

    def character(self) -> tuple[int, int]:
        """Exponents (i, j) with epsilon = omega^i x omega^j."""
        return (self.mod(self.b - self.s_eps), self.mod(self.a + self.s_eps + self.b))

    def label(self) -> str:
        i, j = self.character()
        return f"w^{i} x w^{j}"

    def with_s(self, s: int) -> "GhostContext":
        return GhostContext(self.p, self.a, self.mod(s), self.b)

    def relevant(self) -> Iterator["GhostContext"]:
        """All characters relevant to the same Serre weight."""
        for s in range(self.p - 1):
            yield self.with_s(s)


@dataclass(frozen=True)
class GhostCoefficient:
    """The zeros of g_n as a map from weight to multiplicity."""

    n: int
    zeros: tuple[tuple[int, int], ...]

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.zeros)

    def as_dict(self) -> dict[int, int]:
        return dict(self.zeros)

    def __iter__(self):
        return iter(self.zeros)


def d_iw(ctx: GhostContext, k: int) -> int:
    """Iwahori dimension for the character epsilon * (1 x omega^(2-k)); any k >= 2."""
    if k < 2:
        raise ValueError(f"weight must be >= 2, got {k}")
    p, s = ctx.p, ctx.s_eps
    return (k - 2 - s) // (p - 1) + (k - 2 - ctx.mod(ctx.a + s)) // (p - 1) + 2


def kbullet(ctx: GhostContext, k: int) -> int:
    q, r = divmod(k - ctx.k_eps, ctx.p - 1)
    if r or q < 0:
        raise ValueError(f"weight {k} is not k_eps + (p-1)*kb with kb >= 0 (k_eps = {ctx.k_eps})")
    return q


def weight(ctx: GhostContext, kb: int) -> int:
    return ctx.k_eps + (ctx.p - 1) * kb


def d_iw_self(ctx: GhostContext, k: int) -> int:
    return 2 * kbullet(ctx, k) + 2 - 2 * ctx.delta_eps


def _d_ur_kb(ctx: GhostContext, kb: int) -> int:
    q = ctx.p + 1
    return (kb - ctx.t1) // q + (kb - ctx.t2) // q + 2


def d_ur(ctx: GhostContext, k: int) -> int:
    return _d_ur_kb(ctx, kbullet(ctx, k))


def d_new(ctx: GhostContext, k: int) -> int:
    return d_iw_self(ctx, k) - 2 * d_ur(ctx, k)


def power_basis_degrees(ctx: GhostContext, count: int) -> list[int]:
    """Degrees of the first ``count`` power-basis vectors."""
    step = ctx.p - 1
    x, y = ctx.s_eps, ctx.mod(ctx.a + ctx.s_eps)
    out = []
    while len(out) < count:
        if x < y:
            out.append(x)
            x += step
        else:
            out.append(y)
            y += step
    return out


def power_basis_degree(ctx: GhostContext, n: int) -> int:
    if n < 1:
        raise ValueError("power basis is indexed from 1")
    # the merged progressions alternate, so the n-th term has a closed form
    lo, hi = sorted((ctx.s_eps, ctx.mod(ctx.a + ctx.s_eps)))
    q, r = divmod(n - 1, 2)
    return (lo if r == 0 else hi) + (ctx.p - 1) * q


def hodge_slope(ctx: GhostContext, n: int) -> int:
    deg = power_basis_degree(ctx, n)
    return deg - deg // ctx.p


def multiplicity(ctx: GhostContext, n: int, k: int) -> int:
    if n < 1:
        raise ValueError("n must be positive")
    kb = kbullet(ctx, k)
    return _mult_kb(ctx, n, kb)


def _mult_kb(ctx: GhostContext, n: int, kb: int) -> int:
    u = _d_ur_kb(ctx, kb)
    top = 2 * kb + 2 - 2 * ctx.delta_eps - u
    if u < n < top:
        return min(n - u, top - n)
    return 0


def zero_weights(ctx: GhostContext, nmax: int) -> Iterator[tuple[int, int, int]]:
    """Yield (kb, d_ur, d_iw) for every weight that can be a zero of g_1..g_nmax.

    Stops at the first kb with d_ur >= nmax; d_ur is nondecreasing in kb.
    """
    kb = 0
    while True:
        u = _d_ur_kb(ctx, kb)
        if u >= nmax:
            return
        yield kb, u, 2 * kb + 2 - 2 * ctx.delta_eps
        kb += 1


@lru_cache(maxsize=4096)
def ghost_coefficient(ctx: GhostContext, n: int) -> GhostCoefficient:
    if n < 0:
        raise ValueError("n must be >= 0")
    zeros = []
    if n >= 1:
        for kb, u, D in zero_weights(ctx, n):
            if u < n < D - u:
                zeros.append((weight(ctx, kb), min(n - u, D - u - n)))
    return GhostCoefficient(n, tuple(zeros))


def ghost_degree(ctx: GhostContext, n: int) -> int:
    return ghost_coefficient(ctx, n).degree


def companion(ctx: GhostContext) -> GhostContext:
    """The datum (p - 3 - a, a + b + 1) with the matching character."""
    p = ctx.p
    a2 = p - 3 - ctx.a
    if not 1 <= a2 <= p - 4:
        raise ValueError(f"companion exponent {a2} is not generic")
    return GhostContext(p, a2, ctx.mod(ctx.a + ctx.s_eps + 1), ctx.mod(ctx.a + ctx.b + 1))


def companion_relation(ctx: GhostContext) -> str:
    """How the ghost series of ``ctx`` compares with its companion.

    ``equal``: g_n = g'_n.  ``shift-up``: g_(n+1) = g'_n, i.e. G = 1 + t G'.
    ``shift-down``: g_n = g'_(n+1), i.e. G' = 1 + t G.
    """
    if ctx.s_eps == 0:
        return "shift-up"
    if ctx.s_eps == ctx.p - 2 - ctx.a:
        return "shift-down"
    return "equal"
