"""Delta tables, near-Steinberg ranges and vertex regions of the ghost polygon."""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Optional

from .ghost import (
    GhostContext,
    d_iw_self,
    d_ur,
    ghost_coefficient,
    kbullet,
)
from .newton import (
    NewtonPolygon,
    WeightPoint,
    ghost_np,
    ghost_valuations,
    hull_fill,
    vp_diff,
    vp_ghost,
)
from .padic import INF, Rat, floor_log, vp_int
from .verdict import Verdict

__all__ = [
    "DeltaTable",
    "NearSteinbergRange",
    "delta_prime",
    "delta_table",
    "near_steinberg",
    "ns_ranges",
    "is_near_steinberg",
    "is_vertex",
    "vtx_contains",
    "vertex_agreement",
    "log_floor_term",
    "delta_gap_check",
    "delta_gap_sweep",
    "slope_derivative_plus",
    "slope_derivative_dir",
    "slope_derivatives_by_counting",
    "harmonicity_check",
    "slope_integrality",
    "wk_distance_criterion",
]


@dataclass(frozen=True)
class DeltaTable:
    """Delta' and its convex hull Delta, indexed by l in [-half_new, half_new]."""

    k: int
    half_new: int
    delta_prime: tuple[Fraction, ...]
    delta: tuple[Fraction, ...]
    vertex_flags: tuple[bool, ...]

    def _idx(self, l: int) -> int:
        if self.empty:
            raise ValueError(f"the table at k = {self.k} is empty (d_new = 0)")
        if abs(l) > self.half_new:
            raise ValueError(f"|l| = {abs(l)} exceeds d_new/2 = {self.half_new}")
        return l + self.half_new

    def dp(self, l: int) -> Fraction:
        return self.delta_prime[self._idx(l)]

    def d(self, l: int) -> Fraction:
        return self.delta[self._idx(l)]

    def is_vertex(self, l: int) -> bool:
        return self.vertex_flags[self._idx(l)]

    def gap(self, L: int) -> Fraction:
        """Delta_L - Delta_(L-1)."""
        return self.gaps[L - 1]

    @cached_property
    def gaps(self) -> tuple[Fraction, ...]:
        """Delta_L - Delta_(L-1) for L = 1..half_new; nondecreasing by convexity."""
        h = self.half_new
        return tuple(self.delta[h + L] - self.delta[h + L - 1] for L in range(1, h + 1))

    @property
    def empty(self) -> bool:
        return self.half_new == 0


@dataclass(frozen=True)
class NearSteinbergRange:
    k: int
    center: int
    L: int

    @property
    def empty(self) -> bool:
        return self.L == 0

    def contains(self, n: int) -> bool:
        return abs(n - self.center) < self.L

    def contains_closed(self, n: int) -> bool:
        return not self.empty and abs(n - self.center) <= self.L

    @property
    def interval(self) -> Optional[tuple[int, int]]:
        """Open interval endpoints, or None when empty."""
        return None if self.empty else (self.center - self.L, self.center + self.L)


def _half_new(ctx: GhostContext, k: int) -> tuple[int, int]:
    D = d_iw_self(ctx, k)
    return D // 2, D // 2 - d_ur(ctx, k)


def delta_prime(ctx: GhostContext, k: int, l: int) -> Fraction:
    mid, half = _half_new(ctx, k)
    if abs(l) > max(half, 0):
        raise ValueError(f"|l| must be at most d_new/2 = {max(half, 0)}")
    v = vp_ghost(ctx, mid + l, WeightPoint(k), exclude=k)
    return v - Fraction((k - 2) * l, 2)


@lru_cache(maxsize=8192)
def delta_table(ctx: GhostContext, k: int) -> DeltaTable:
    mid, half = _half_new(ctx, k)
    if half <= 0:
        return DeltaTable(k, 0, (), (), ())
    vals = ghost_valuations(ctx, WeightPoint(k), mid + half, exclude=k)
    # doubled values keep the hull computation in integers
    twice = [int(2 * vals[mid + l]) - (k - 2) * l for l in range(-half, half + 1)]
    filled, flags = hull_fill(twice)
    dp = tuple(Fraction(y, 2) for y in twice)
    delta = tuple(y / 2 for y in filled)
    return DeltaTable(k, half, dp, delta, tuple(flags))


def near_steinberg(ctx: GhostContext, w: WeightPoint, k: int) -> NearSteinbergRange:
    return NearSteinbergRange(k, d_iw_self(ctx, k) // 2, _ns_length(ctx, k, vp_diff(w, k, ctx.p)))


@lru_cache(maxsize=1 << 16)
def _ns_length(ctx: GhostContext, k: int, v: Rat) -> int:
    table = delta_table(ctx, k)
    return table.half_new if v is INF else bisect_right(table.gaps, v)


def ns_ranges(ctx: GhostContext, w: WeightPoint, n: int) -> list[NearSteinbergRange]:
    """Nonempty ranges over every weight whose open range could contain n."""
    out = []
    for k, _ in ghost_coefficient(ctx, n):
        r = near_steinberg(ctx, w, k)
        if not r.empty:
            out.append(r)
    return out


def is_near_steinberg(ctx: GhostContext, w: WeightPoint, n: int) -> bool:
    return any(r.contains(n) for r in ns_ranges(ctx, w, n))


def is_vertex(ctx: GhostContext, w: WeightPoint, n: int, poly: Optional[NewtonPolygon] = None) -> bool:
    """Whether (n, v_p(g_n(w))) is a vertex of the ghost polygon."""
    if n < 1:
        raise ValueError("n must be positive")
    if poly is None or poly.length < n + 1:
        poly = ghost_np(ctx, w, n + 1)
    return n in poly.vertex_xs()


def vtx_contains(ctx: GhostContext, n: int, w: WeightPoint) -> bool:
    """Membership of w in the vertex region for index n, from its disk description."""
    for k, _ in ghost_coefficient(ctx, n):
        table = delta_table(ctx, k)
        j = abs(d_iw_self(ctx, k) // 2 - n)
        if vp_diff(w, k, ctx.p) >= table.gaps[j]:
            return False
    return True


def vertex_agreement(ctx: GhostContext, w: WeightPoint, nmax: int) -> Verdict:
    """is_vertex, not near-Steinberg and Vtx membership agree for n = 1..nmax."""
    poly = ghost_np(ctx, w, nmax + 1)
    xs = set(poly.vertex_xs())
    for n in range(1, nmax + 1):
        vertex = n in xs
        ns = is_near_steinberg(ctx, w, n)
        vtx = vtx_contains(ctx, n, w)
        if not (vertex == (not ns) == vtx):
            return Verdict.failed(n=n, vertex=vertex, near_steinberg=ns, vtx=vtx)
    return Verdict.passed(checked=nmax)


def log_floor_term(p: int, x: int) -> int:
    """floor(ln(x)/ln(p) + 1) for a positive integer x, computed exactly."""
    return floor_log(x, p) + 1


def _ur_in_window(ctx: GhostContext, k: int, k2: int, width: int) -> bool:
    mid = d_iw_self(ctx, k) // 2
    u2 = d_ur(ctx, k2)
    top2 = d_iw_self(ctx, k2) - u2
    return any(mid - width <= x <= mid + width for x in (u2, top2))


def delta_gap_check(ctx: GhostContext, k: int, l: int, l1: int, l2: int, k2: Optional[int] = None) -> Verdict:
    """Check Delta_(k,l2) - Delta'_(k,l) against its quadratic lower bound.

    With ``k2`` supplied (and satisfying the window condition for ``l1``) the
    sharper inequality involving v_p(w_k - w_k2) is checked too.
    """
    key = {"k": k, "l": l, "l1": l1, "l2": l2, "k2": k2}
    if ctx.p < 7:
        return Verdict.inapplicable("needs p >= 7", **key)
    table = delta_table(ctx, k)
    h = table.half_new
    if not (0 <= l <= l1 <= l2 <= h and l2 > l):
        return Verdict.inapplicable("need 0 <= l <= l1 <= l2 <= d_new/2 and l2 > l", **key)
    if (l, l1, l2) == (0, 1, 1):
        return Verdict.inapplicable("the triple (0, 1, 1) is excluded", **key)
    lhs = table.d(l2) - table.dp(l)
    rhs = Fraction(l2 * l2 - l * l, 2) + 1
    if lhs < rhs:
        return Verdict.failed(lhs=lhs, rhs=rhs, **key)
    if k2 is None:
        return Verdict.passed(lhs=lhs, rhs=rhs, **key)
    if not _ur_in_window(ctx, k, k2, l1):
        return Verdict.inapplicable("k2 misses the d_ur window", **key)
    if k2 == k:
        dist_term = Fraction(0) if l2 == l1 else INF
    else:
        dist_term = (l2 - l1) * Fraction(1 + vp_int(k - k2, ctx.p))
    if dist_term is INF:
        return Verdict.inapplicable("infinite distance term", **key)
    lhs2 = lhs - dist_term
    rhs2 = (l1 - l) * log_floor_term(ctx.p, (ctx.p + 1) * l2) + Fraction(l2 * l2 - l * l, 2)
    if lhs2 < rhs2:
        return Verdict.failed(lhs=lhs2, rhs=rhs2, refined=True, **key)
    return Verdict.passed(lhs=lhs2, rhs=rhs2, refined=True, **key)


def delta_gap_sweep(ctx: GhostContext, k: int) -> Verdict:
    """Simple form of the gap inequality for every pair l < l2 at weight k.

    The inequality does not involve l1, and every pair is reached by the
    admissible triple (l, l, l2), so it suffices to compare Delta'_l - l^2/2 with
    the suffix minimum of Delta_l2 - l2^2/2.
    """
    if ctx.p < 7:
        return Verdict.inapplicable("needs p >= 7", k=k)
    table = delta_table(ctx, k)
    h = table.half_new
    best = None
    for l in range(h - 1, -1, -1):
        cand = table.d(l + 1) - Fraction((l + 1) ** 2, 2)
        if best is None or cand < best[0]:
            best = (cand, l + 1)
        if best[0] - (table.dp(l) - Fraction(l * l, 2)) < 1:
            l2 = best[1]
            return Verdict.failed(k=k, l=l, l2=l2, lhs=table.d(l2) - table.dp(l), rhs=Fraction(l2 * l2 - l * l, 2) + 1)
    return Verdict.passed(k=k, pairs=h * (h + 1) // 2)


def _check_mu(mu) -> int:
    mu = Fraction(mu)
    if mu <= 0 or mu.denominator != 1:
        raise ValueError("mu must be a positive integer")
    return int(mu)


_HALF = Fraction(1, 2)


def slope_derivative_plus(ctx: GhostContext, n: int, k0: int, mu) -> Fraction:
    """Outward slope derivative of v_p(g_n) at eta(k0, mu).

    Sign convention: the rate at which the valuation drops as the radius grows,
    so that it equals the number of zeros (with multiplicity) in the closed
    disk.  Since v_p is piecewise linear with integer breaks, a step of 1/2 is
    exact.
    """
    mu = _check_mu(mu)
    here = vp_ghost(ctx, n, WeightPoint(k0, mu))
    out = vp_ghost(ctx, n, WeightPoint(k0, mu - _HALF))
    return (here - out) / _HALF


def slope_derivative_dir(ctx: GhostContext, n: int, k0: int, mu, alpha: int) -> Fraction:
    """Inward derivative toward the residue subdisk w_k0 + alpha p^mu, same sign convention.

    The subdisk is represented by the classical weight k0 + alpha p^(mu-1).
    """
    mu = _check_mu(mu)
    alpha %= ctx.p
    center = k0 + alpha * ctx.p ** (mu - 1)
    here = vp_ghost(ctx, n, WeightPoint(k0, mu))
    inside = vp_ghost(ctx, n, WeightPoint(center, mu + _HALF))
    return -(inside - here) / _HALF


def slope_derivatives_by_counting(ctx: GhostContext, n: int, k0: int, mu) -> tuple[int, dict[int, int]]:
    """V+ and the nonzero V^alpha from the zero multiset of g_n alone."""
    mu = _check_mu(mu)
    plus = 0
    by_alpha: dict[int, int] = {}
    for k, m in ghost_coefficient(ctx, n):
        if k == k0:
            v, alpha = None, 0
        else:
            e = vp_int(k - k0, ctx.p)
            v = 1 + e
            if v < mu:
                continue
            alpha = ((k - k0) // ctx.p ** (mu - 1)) % ctx.p if v == mu else 0
        plus += m
        by_alpha[alpha] = by_alpha.get(alpha, 0) - m
    return plus, {a: c for a, c in sorted(by_alpha.items()) if c}


def harmonicity_check(ctx: GhostContext, n: int, k0: int, mu) -> Verdict:
    mu_i = _check_mu(mu)
    key = {"n": n, "k0": k0, "mu": mu_i}
    plus = slope_derivative_plus(ctx, n, k0, mu_i)
    dirs = {a: slope_derivative_dir(ctx, n, k0, mu_i, a) for a in range(ctx.p)}
    count_plus, count_dirs = slope_derivatives_by_counting(ctx, n, k0, mu_i)
    total = plus + sum(dirs.values())
    nonzero = {a: v for a, v in dirs.items() if v}
    if total != 0 or plus != count_plus or nonzero != count_dirs:
        return Verdict.failed(plus=plus, total=total, counted_plus=count_plus, **key)
    return Verdict.passed(plus=plus, total=total, **key)


def slope_integrality(ctx: GhostContext, k0: int, count: int = 20) -> Verdict:
    poly = ghost_np(ctx, WeightPoint(k0), count)
    half_a = Fraction(ctx.a, 2)
    for s, length in poly.segments():
        if length == 1:
            ok = s.denominator == 1
        else:
            ok = length % 2 == 0 and (s - half_a).denominator == 1
        if not ok:
            return Verdict.failed(k0=k0, slope=s, multiplicity=length)
    return Verdict.passed(k0=k0, segments=len(poly.segments()))


def wk_distance_criterion(ctx: GhostContext, k: int, k2: int) -> Verdict:
    """Bound on v_p(w_k - w_k2) by floor(log_p((p+1) d_new/2) + 1) under the three hypotheses."""
    key = {"k": k, "k2": k2}
    if k == k2:
        return Verdict.inapplicable("weights coincide", **key)
    kb, kb2 = kbullet(ctx, k), kbullet(ctx, k2)
    D, u = d_iw_self(ctx, k), d_ur(ctx, k)
    half = D // 2 - u
    if half <= 0:
        return Verdict.inapplicable("d_new = 0", **key)
    D2, u2 = d_iw_self(ctx, k2), d_ur(ctx, k2)
    hyps = []
    if u <= D2 // 2 <= D - u:
        hyps.append(1)
    if kb2 < kb:
        hyps.append(2)
    if u <= u2 and 2 * u2 < D:
        hyps.append(3)
    if not hyps:
        return Verdict.inapplicable("no hypothesis holds", **key)
    gamma = log_floor_term(ctx.p, (ctx.p + 1) * half)
    dist = 1 + vp_int(k - k2, ctx.p)
    if dist > gamma:
        return Verdict.failed(distance=dist, gamma=gamma, hypotheses=hyps, **key)
    return Verdict.passed(distance=dist, gamma=gamma, hypotheses=hyps, **key)
