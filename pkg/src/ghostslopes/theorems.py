"""Verifiers for the slope identities and bounds satisfied by the ghost series."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .ghost import (
    GhostContext,
    d_iw,
    d_iw_self,
    d_ur,
    ghost_coefficient,
    kbullet,
    power_basis_degrees,
)
from .newton import WeightPoint, ghost_degrees, ghost_np
from .padic import vp_int
from .verdict import Verdict

__all__ = [
    "AntidiagonalEntry",
    "SlopeStats",
    "al_matrix",
    "al_involution_check",
    "corank_bound",
    "theta_check",
    "al_check",
    "pstab_check",
    "gouvea_bound",
    "gouvea_bound_check",
    "duality_check",
    "gm_check",
    "slopes_at",
    "distribution",
    "limit_cdf",
    "kolmogorov_distance",
    "wasserstein_distance",
    "distribution_check",
    "halo_check",
    "companion_check",
    "DEFAULT_SLACK",
]


@dataclass(frozen=True)
class AntidiagonalEntry:
    """AL sends e_col to p^valuation times e''_row."""

    row: int
    col: int
    degree: int
    valuation: int


def _al_partner(ctx: GhostContext, k: int) -> GhostContext:
    return ctx.with_s(k - 2 - ctx.a - ctx.s_eps)


def al_matrix(ctx: GhostContext, k: int) -> list[AntidiagonalEntry]:
    d = d_iw(ctx, k)
    degs = power_basis_degrees(ctx, d)
    return [AntidiagonalEntry(d + 1 - l, l, degs[l - 1], k - 2 - degs[l - 1]) for l in range(1, d + 1)]


def al_involution_check(ctx: GhostContext, k: int) -> Verdict:
    """AL'' o AL is p^(k-2) on every basis vector."""
    partner = _al_partner(ctx, k)
    d = d_iw(ctx, k)
    if d_iw(partner, k) != d:
        return Verdict.failed("dimension mismatch", k=k)
    back = {e.col: e.valuation for e in al_matrix(partner, k)}
    for e in al_matrix(ctx, k):
        total = e.valuation + back[e.row]
        if total != k - 2:
            return Verdict.failed(k=k, l=e.col, total=total)
    return Verdict.passed(k=k, d=d)


def corank_bound(ctx: GhostContext, zeta: Sequence[int], xi: Sequence[int], k: int) -> tuple[int, int, int]:
    """(r, s, m) of the corank estimate for the minor indexed by zeta x xi."""
    if len(zeta) != len(xi):
        raise ValueError("index sets must have equal size")
    for name, seq in (("zeta", zeta), ("xi", xi)):
        if any(b <= a for a, b in zip(seq, seq[1:])) or any(i < 1 for i in seq):
            raise ValueError(f"{name} must be strictly increasing positive integers")
    d = d_iw_self(ctx, k)
    zs = set(zeta)
    r = sum(1 for i in xi if i <= d and d + 1 - i in zs)
    s = sum(1 for i in xi if i > d)
    return r, s, len(xi) - d_ur(ctx, k) - r - s


def _slopes(ctx: GhostContext, w: WeightPoint, count: int) -> list[Fraction]:
    return ghost_np(ctx, w, count).slopes()[:count]


def slopes_at(ctx: GhostContext, k0: int, count: int) -> list[Fraction]:
    """First ``count`` slopes of the ghost polygon at the classical point w_k0."""
    return _slopes(ctx, WeightPoint(k0), count)


def theta_check(ctx: GhostContext, k0: int, count: int = 10) -> Verdict:
    if k0 < 2:
        raise ValueError("k0 must be >= 2")
    if count <= 0:
        return Verdict.passed(k0=k0, checked=0)
    d = d_iw(ctx, k0)
    other = ctx.with_s(ctx.s_eps + 1 - k0)
    left = _slopes(ctx, WeightPoint(k0), d + count)[d:]
    right = _slopes(other, WeightPoint(2 - k0), count)
    for l, (x, y) in enumerate(zip(left, right), 1):
        if x != k0 - 1 + y:
            return Verdict.failed(k0=k0, l=l, left=x, right=y)
    return Verdict.passed(k0=k0, checked=count)


def al_check(ctx: GhostContext, k0: int, count: Optional[int] = None) -> Verdict:
    if (k0 - ctx.k_eps) % (ctx.p - 1) == 0:
        raise ValueError("k0 is congruent to k_eps; use pstab_check")
    d = d_iw(ctx, k0)
    if d == 0:
        return Verdict.passed(k0=k0, checked=0)
    partner = _al_partner(ctx, k0)
    mine = _slopes(ctx, WeightPoint(k0), d)
    theirs = _slopes(partner, WeightPoint(k0), d)
    top = d if count is None else min(count, d)
    for l in range(1, top + 1):
        if mine[l - 1] + theirs[d - l] != k0 - 1:
            return Verdict.failed(k0=k0, l=l, left=mine[l - 1], right=theirs[d - l])
    return Verdict.passed(k0=k0, checked=top)


def pstab_check(ctx: GhostContext, k0: int, count: Optional[int] = None) -> Verdict:
    kbullet(ctx, k0)
    d, u = d_iw_self(ctx, k0), d_ur(ctx, k0)
    top = u if count is None else min(count, u)
    if top == 0:
        return Verdict.passed(k0=k0, checked=0)
    sl = _slopes(ctx, WeightPoint(k0), d)
    for l in range(1, top + 1):
        if sl[l - 1] + sl[d - l] != k0 - 1:
            return Verdict.failed(k0=k0, l=l, left=sl[l - 1], right=sl[d - l])
    return Verdict.passed(k0=k0, checked=top)


def gouvea_bound(ctx: GhostContext, k0: int) -> tuple[Fraction, int]:
    """The two sides of the bound on the first d_ur slopes at w_k0."""
    u = d_ur(ctx, k0)
    n = u - 1
    beta = Fraction(ctx.t1) if n % 2 == 0 else ctx.t2 - Fraction(ctx.p + 1, 2)
    middle = Fraction((ctx.p - 1) * n, 2) - ctx.delta_eps + beta
    outer = (k0 - 1 - min(ctx.a + 1, ctx.p - 2 - ctx.a)) // (ctx.p + 1)
    return middle, outer


def gouvea_bound_check(ctx: GhostContext, k0: int) -> Verdict:
    kbullet(ctx, k0)
    u = d_ur(ctx, k0)
    if u == 0:
        return Verdict.passed(k0=k0, checked=0)
    middle, outer = gouvea_bound(ctx, k0)
    if middle > outer:
        return Verdict.failed("bound chain", k0=k0, middle=middle, outer=outer)
    sl = _slopes(ctx, WeightPoint(k0), u)
    worst = max(sl)
    if worst > middle:
        return Verdict.failed(k0=k0, slope=worst, bound=middle)
    return Verdict.passed(k0=k0, checked=u, bound=middle, outer=outer, max_slope=worst)


def duality_check(ctx: GhostContext, k0: int) -> Verdict:
    """Valuation gap between the punctured coefficients at d_ur + l and d_iw - d_ur - l."""
    from .newton import ghost_valuations

    D, u = d_iw_self(ctx, k0), d_ur(ctx, k0)
    half = D // 2 - u
    if half <= 0:
        return Verdict.passed(k0=k0, checked=0)
    vals = ghost_valuations(ctx, WeightPoint(k0), D - u, exclude=k0)
    for l in range(half):
        diff = vals[D - u - l] - vals[u + l]
        if diff != (k0 - 2) * (half - l):
            return Verdict.failed(k0=k0, l=l, diff=diff, expected=(k0 - 2) * (half - l))
    return Verdict.passed(k0=k0, checked=half)


def _slopes_up_to(ctx: GhostContext, k: int, bound: int) -> list[Fraction]:
    count = 8
    while True:
        poly = ghost_np(ctx, WeightPoint(k), count)
        sl = poly.slopes()
        if sl and sl[-1] > bound:
            return [s for s in sl if s <= bound]
        count *= 2


def gm_check(ctx: GhostContext, k1: int, k2: int, m: int) -> Verdict:
    key = {"k1": min(k1, k2), "k2": max(k1, k2), "m": m}
    if m < 4:
        return Verdict.inapplicable("m must be >= 4", **key)
    if min(k1, k2) <= m - 3:
        return Verdict.inapplicable("weights must exceed m - 3", **key)
    for k in (k1, k2):
        if (k - ctx.k_eps) % (ctx.p - 1):
            return Verdict.inapplicable("weights must be congruent to k_eps", **key)
    if k1 != k2 and vp_int(k1 - k2, ctx.p) < m:
        return Verdict.inapplicable("v_p(k1 - k2) < m", **key)
    a = _slopes_up_to(ctx, key["k1"], m - 4)
    b = _slopes_up_to(ctx, key["k2"], m - 4)
    if a != b:
        return Verdict.failed(first=[str(x) for x in a], second=[str(x) for x in b], **key)
    return Verdict.passed(agreed=len(a), **key)


@dataclass(frozen=True)
class SlopeStats:
    k: int
    slopes: tuple[Fraction, ...]
    d_ur: int
    d_iw: int

    @property
    def normalized(self) -> tuple[Fraction, ...]:
        return tuple(s / (self.k - 1) for s in self.slopes)

    def histogram(self, bins: int = 20) -> list[Fraction]:
        """Mass of the normalized slopes in [i/bins, (i+1)/bins), last bin closed."""
        mass = [Fraction(0)] * bins
        if not self.slopes:
            return mass
        share = Fraction(1, len(self.slopes))
        for x in self.normalized:
            i = min(int(x * bins), bins - 1)
            mass[i] += share
        return mass


def distribution(ctx: GhostContext, k: int) -> SlopeStats:
    D = d_iw_self(ctx, k)
    sl = tuple(_slopes(ctx, WeightPoint(k), D)) if D else ()
    return SlopeStats(k, sl, d_ur(ctx, k), D)


def limit_cdf(p: int, x: Fraction, left: bool = False) -> Fraction:
    """CDF of the limiting measure; ``left`` gives the left limit at x."""
    a, b, half = Fraction(1, p + 1), Fraction(p, p + 1), Fraction(1, 2)
    if x <= 0:
        return Fraction(0)
    if x >= 1:
        return Fraction(1)
    value = min(x, a)
    if x > half or (x == half and not left):
        value += Fraction(p - 1, p + 1)
    if x > b:
        value += x - b
    return value


def kolmogorov_distance(p: int, normalized: Sequence[Fraction]) -> Fraction:
    """sup |F_k - F| for the uniform measure on ``normalized`` against the limit."""
    pts = sorted(normalized)
    n = len(pts)
    if n == 0:
        return Fraction(1)
    candidates = sorted(set(pts) | {Fraction(0), Fraction(1, 2), Fraction(1)})
    best = Fraction(0)
    for x in candidates:
        below = sum(1 for t in pts if t < x)
        upto = sum(1 for t in pts if t <= x)
        best = max(
            best,
            abs(Fraction(below, n) - limit_cdf(p, x, left=True)),
            abs(Fraction(upto, n) - limit_cdf(p, x)),
        )
    return best


def wasserstein_distance(p: int, normalized: Sequence[Fraction]) -> Fraction:
    """Integral over [0, 1] of |F_k - F|, exact.

    Unlike the Kolmogorov distance this metrizes weak convergence, so it does
    not charge the atom at (k-2)/(2(k-1)) for sitting just left of 1/2.
    """
    pts = sorted(normalized)
    n = len(pts)
    if n == 0:
        raise ValueError("empty sample")
    breaks = sorted(
        {Fraction(0), Fraction(1), Fraction(1, p + 1), Fraction(1, 2), Fraction(p, p + 1)}
        | {x for x in pts if 0 < x < 1}
    )
    total = Fraction(0)
    i = 0
    for x0, x1 in zip(breaks, breaks[1:]):
        while i < n and pts[i] <= x0:
            i += 1
        c = Fraction(i, n)
        g0 = c - limit_cdf(p, x0)
        g1 = c - limit_cdf(p, x1, left=True)
        width = x1 - x0
        if g0 * g1 >= 0:
            total += (abs(g0) + abs(g1)) / 2 * width
        else:
            total += (g0 * g0 + g1 * g1) / (2 * (abs(g0) + abs(g1))) * width
    return total


def _within_log_slack(dev: Fraction, C: Fraction, p: int, k: int) -> bool:
    """dev <= C log_p k, decided with integers: p^(dev/C) <= k."""
    if dev <= 0:
        return True
    if C <= 0:
        return False
    q = dev / C
    return p ** q.numerator <= k ** q.denominator


def _load_default_slack() -> Fraction:
    import json
    from importlib import resources

    raw = json.loads(resources.files("ghostslopes").joinpath("data/distribution_slack.json").read_text())
    return Fraction(raw["C"])


DEFAULT_SLACK = _load_default_slack()


def distribution_check(ctx: GhostContext, k: int, C=None) -> Verdict:
    C = DEFAULT_SLACK if C is None else Fraction(C)
    st = distribution(ctx, k)
    if not st.slopes:
        return Verdict.passed(k=k, checked=0, C=C)
    D, u = st.d_iw, st.d_ur
    mid = Fraction(k - 2, 2)
    for i in range(u, D - u):
        if st.slopes[i] != mid:
            return Verdict.failed("middle slope", k=k, index=i + 1, slope=st.slopes[i])
    for i in range(1, u + 1):
        target = Fraction((ctx.p - 1) * i, 2)
        for slope in (st.slopes[i - 1], (k - 1) - st.slopes[D - i]):
            dev = abs(slope - target)
            if not _within_log_slack(dev, C, ctx.p, k):
                return Verdict.failed("log slack", k=k, index=i, deviation=dev, C=C)
    return Verdict.passed(
        k=k,
        kolmogorov=kolmogorov_distance(ctx.p, st.normalized),
        wasserstein=wasserstein_distance(ctx.p, st.normalized),
        C=C,
    )


def halo_check(ctx: GhostContext, r, count: int = 50) -> Verdict:
    r = Fraction(r)
    if not 0 < r < 1:
        raise ValueError("r must lie in (0, 1)")
    poly = ghost_np(ctx, WeightPoint(2, r), count)
    sl = poly.slopes()[:count]
    degs = ghost_degrees(ctx, count)
    incs = [degs[n] - degs[n - 1] for n in range(1, count + 1)]
    for n in range(1, count + 1):
        if sl[n - 1] != r * incs[n - 1]:
            return Verdict.failed(n=n, slope=sl[n - 1], expected=r * incs[n - 1])
    if any(b <= a for a, b in zip(incs, incs[1:])):
        return Verdict.failed("increments not strictly increasing", r=r)
    if any(length != 1 for _, length in poly.segments()):
        return Verdict.failed("repeated halo slope", r=r)
    return Verdict.passed(r=r, checked=count)


def companion_check(ctx: GhostContext, nmax: int = 30) -> Verdict:
    """Compare ghost zero multisets with the companion datum."""
    from .ghost import companion, companion_relation

    other = companion(ctx)
    rel = companion_relation(ctx)
    for n in range(0, nmax + 1):
        mine = ghost_coefficient(ctx, n).as_dict()
        if rel == "equal":
            theirs = ghost_coefficient(other, n).as_dict()
        elif rel == "shift-up":
            theirs = ghost_coefficient(other, n - 1).as_dict() if n else {}
        else:
            theirs = ghost_coefficient(other, n + 1).as_dict()
        if mine != theirs:
            return Verdict.failed(relation=rel, n=n)
    return Verdict.passed(relation=rel, checked=nmax)
