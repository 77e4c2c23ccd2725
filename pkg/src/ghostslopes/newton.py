"""Gaussian points of the weight disk and Newton polygons of the ghost series.

A :class:`WeightPoint` ``eta(k0, r)`` is the Gaussian point of the closed disk
of radius ``p**-r`` around ``w_k0``.  Because ``v_p(w_k - w_k') = 1 + v_p(k - k')``
the valuation of any ghost coefficient at such a point is an exact rational.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .ghost import GhostContext, ghost_coefficient
from .padic import INF, Rat, vp_int

__all__ = [
    "WeightPoint",
    "NewtonPolygon",
    "StabilityError",
    "vp_diff",
    "vp_ghost",
    "ghost_valuations",
    "ghost_degrees",
    "hull",
    "hull_fill",
    "ghost_np",
    "stretch",
    "merge",
    "global_np",
    "N_CAP",
]

N_CAP = 1 << 14


class StabilityError(RuntimeError):
    """Raised when a Newton polygon prefix cannot be certified within the index cap."""


@dataclass(frozen=True)
class WeightPoint:
    center: int
    radius: Rat = INF

    def __post_init__(self):
        r = self.radius
        if r is not INF:
            r = Fraction(r)
            if r <= 0:
                raise ValueError("radius must be positive")
            object.__setattr__(self, "radius", r)

    @property
    def classical(self) -> bool:
        return self.radius is INF

    def __str__(self):
        return f"eta({self.center}, {self.radius})"


def vp_diff(w: WeightPoint, k: int, p: int) -> Rat:
    """v_p(w - w_k) at the Gaussian point ``w``."""
    if k == w.center:
        return w.radius
    d = 1 + vp_int(w.center - k, p)
    return d if w.classical or d <= w.radius else w.radius


def vp_ghost(ctx: GhostContext, n: int, w: WeightPoint, exclude: Optional[int] = None) -> Rat:
    """v_p(g_n(w)), optionally with the factor at weight ``exclude`` removed."""
    if n == 0:
        return Fraction(0)
    total: Rat = Fraction(0)
    for k, m in ghost_coefficient(ctx, n):
        if k != exclude:
            total = total + m * vp_diff(w, k, ctx.p)
    return total


def _vp_array(x: np.ndarray, p: int) -> np.ndarray:
    x = np.abs(x)
    out = np.zeros(x.shape, dtype=np.int64)
    mask = x != 0
    while True:
        div = mask & (x % p == 0)
        if not div.any():
            return out
        out[div] += 1
        x = np.where(div, x // p, x)


@lru_cache(maxsize=256)
def _zero_rows(ctx: GhostContext, nmax: int) -> np.ndarray:
    """Rows (kb, d_ur, d_iw) as in ``ghost.zero_weights``, built in one shot."""
    q = ctx.p + 1
    # d_ur(kb) >= 2 (kb - t2) / q, so this range reaches past d_ur = nmax
    kb = np.arange(q * (nmax + 2) // 2 + ctx.t2 + q, dtype=np.int64)
    u = (kb - ctx.t1) // q + (kb - ctx.t2) // q + 2
    keep = u < nmax
    cut = int(np.argmin(keep)) if not keep.all() else len(kb)
    rows = np.stack([kb, u, 2 * kb + 2 - 2 * ctx.delta_eps], axis=1)[:cut]
    rows.flags.writeable = False
    return rows


def _scaled_valuations(ctx: GhostContext, w: WeightPoint, nmax: int, exclude: Optional[int]):
    """Integer numerators and common denominator of v_p(g_n(w)) for n = 0..nmax.

    Each zero weight contributes a tent n -> m_n(k); its second difference is
    supported on three indices, so two cumulative sums assemble all values.
    The returned mask flags indices where the value is infinite.
    """
    den = 1 if w.classical else w.radius.denominator
    rows = _zero_rows(ctx, nmax)
    inf_mask = np.zeros(nmax + 1, dtype=bool)
    second = np.zeros(nmax + 3, dtype=np.int64)
    if len(rows):
        kb, u, D = rows[:, 0], rows[:, 1], rows[:, 2]
        ks = ctx.k_eps + (ctx.p - 1) * kb
        keep = (D - 2 * u > 0)
        if exclude is not None:
            keep &= ks != exclude
        at_center = ks == w.center
        diff = ks - w.center
        c = (1 + _vp_array(diff, ctx.p)) * den
        if not w.classical:
            rnum = w.radius.numerator
            c = np.minimum(c, rnum)
            c[at_center] = rnum
        else:
            hit = keep & at_center
            if hit.any():
                i = int(np.flatnonzero(hit)[0])
                lo, hi = int(u[i]), int(D[i] - u[i])
                inf_mask[lo + 1 : min(hi, nmax + 1)] = True
            keep &= ~at_center
        u, D, c = u[keep], D[keep], c[keep]
        for idx, coef in ((u + 1, c), (D // 2 + 1, -2 * c), (D - u + 1, c)):
            sel = idx <= nmax
            np.add.at(second, idx[sel], coef[sel])
    vals = np.cumsum(np.cumsum(second[: nmax + 1]))
    return vals, den, inf_mask


def ghost_valuations(ctx: GhostContext, w: WeightPoint, nmax: int, exclude: Optional[int] = None) -> list[Rat]:
    """[v_p(g_0(w)), ..., v_p(g_nmax(w))]; ``exclude`` drops the factor at that weight."""
    vals, den, inf_mask = _scaled_valuations(ctx, w, nmax, exclude)
    return [INF if inf_mask[i] else Fraction(int(vals[i]), den) for i in range(nmax + 1)]


def ghost_degrees(ctx: GhostContext, nmax: int) -> list[int]:
    """[deg g_0, ..., deg g_nmax]: every zero counts once at the Gaussian point of radius 1."""
    vals, _, _ = _scaled_valuations(ctx, WeightPoint(ctx.k_eps, 1), nmax, None)
    return [int(v) for v in vals]


@dataclass(frozen=True)
class NewtonPolygon:
    """Lower convex hull given by its vertices, starting at x = 0."""

    vertices: tuple[tuple[int, Fraction], ...]

    @classmethod
    def from_slopes(cls, slopes: Iterable) -> "NewtonPolygon":
        pts = [(0, Fraction(0))]
        for s in sorted(Fraction(s) for s in slopes):
            x, y = pts[-1]
            pts.append((x + 1, y + s))
        return hull(pts)

    @property
    def length(self) -> int:
        return self.vertices[-1][0] if self.vertices else 0

    def segments(self) -> list[tuple[Fraction, int]]:
        """(slope, horizontal length) for every edge."""
        out = []
        for (x0, y0), (x1, y1) in zip(self.vertices, self.vertices[1:]):
            out.append((Fraction(y1 - y0, 1) / (x1 - x0), x1 - x0))
        return out

    def slopes(self) -> list[Fraction]:
        out: list[Fraction] = []
        for s, length in self.segments():
            out.extend([s] * length)
        return out

    def vertex_xs(self) -> list[int]:
        return [x for x, _ in self.vertices]

    def value_at(self, x: int) -> Fraction:
        for (x0, y0), (x1, y1) in zip(self.vertices, self.vertices[1:]):
            if x0 <= x <= x1:
                return y0 + (y1 - y0) * Fraction(x - x0, x1 - x0)
        if self.vertices and x == self.vertices[0][0]:
            return self.vertices[0][1]
        raise ValueError(f"x = {x} outside the polygon")

    def truncate(self, x_end: int) -> "NewtonPolygon":
        """Prefix ending at the vertex ``x_end``."""
        return NewtonPolygon(tuple(v for v in self.vertices if v[0] <= x_end))


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _lower_chain(points: Sequence[tuple]) -> list[tuple]:
    chain: list[tuple] = []
    for pt in points:
        while len(chain) >= 2 and _cross(chain[-2], chain[-1], pt) <= 0:
            chain.pop()
        chain.append(pt)
    return chain


def hull(points: Iterable[tuple[int, Rat]]) -> NewtonPolygon:
    """Lower convex hull of (x, y) points; infinite y-values are skipped."""
    pts = []
    seen = set()
    for x, y in points:
        if x in seen:
            raise ValueError(f"duplicate x-coordinate {x}")
        seen.add(x)
        if y is not INF:
            pts.append((int(x), Fraction(y)))
    pts.sort()
    if not pts:
        return NewtonPolygon(())
    return NewtonPolygon(tuple(_lower_chain(pts)))


def hull_fill(ys: Sequence) -> tuple[list[Fraction], list[bool]]:
    """Values of the lower hull of (i, ys[i]) at every i, and the vertex flags.

    Works on integers or fractions; a single linear pass after the chain.
    """
    chain = _lower_chain(list(enumerate(ys)))
    values: list[Fraction] = []
    flags = [False] * len(ys)
    for (x0, y0), (x1, y1) in zip(chain, chain[1:]):
        step = Fraction(y1 - y0, x1 - x0)
        for x in range(x0, x1):
            values.append(y0 + step * (x - x0))
    if chain:
        values.append(Fraction(chain[-1][1]))
    for x, _ in chain:
        flags[x] = True
    return values, flags


def _int_hull_vertices(vals: np.ndarray, inf_mask: np.ndarray, nmax: int) -> list[int]:
    pts = [(i, int(vals[i])) for i in range(nmax + 1) if not inf_mask[i]]
    return [x for x, _ in _lower_chain(pts)]


def ghost_np(ctx: GhostContext, w: WeightPoint, count: int, exclude: Optional[int] = None) -> NewtonPolygon:
    """Certified prefix of NP(G(w, -)) covering at least the first ``count`` slopes.

    The index range 0..N grows until the count-th slope ends at a vertex
    strictly before N and two successive ranges agree on that prefix.
    """
    if count < 0:
        raise ValueError("count must be >= 0")
    if count == 0:
        return NewtonPolygon(((0, Fraction(0)),))
    if count >= N_CAP:
        raise StabilityError(f"count {count} exceeds the index cap {N_CAP}")
    N = 2 * count + 8
    previous = None
    while True:
        vals, den, inf_mask = _scaled_valuations(ctx, w, N, exclude)
        xs = _int_hull_vertices(vals, inf_mask, N)
        ends = [x for x in xs if count <= x < N]
        if ends and xs[-1] > ends[0]:
            cut = ends[0]
            prefix = tuple((x, Fraction(int(vals[x]), den)) for x in xs if x <= cut)
            if prefix == previous:
                return NewtonPolygon(prefix)
            previous = prefix
        if N >= N_CAP:
            raise StabilityError(f"slope {count} not certified below index {N_CAP} at {w}")
        N = min(2 * N, N_CAP)


def stretch(np_: NewtonPolygon, m: int) -> NewtonPolygon:
    if m < 1:
        raise ValueError("stretch factor must be positive")
    return NewtonPolygon(tuple((m * x, m * y) for x, y in np_.vertices))


def merge(np1: NewtonPolygon, np2: NewtonPolygon) -> NewtonPolygon:
    return NewtonPolygon.from_slopes(np1.slopes() + np2.slopes())


def global_np(
    ctx: GhostContext,
    w: WeightPoint,
    m: int,
    m1: int = 0,
    m2: int = 0,
    split: bool = False,
    count: int = 10,
) -> NewtonPolygon:
    """Ghost polygon for a global multiplicity ``m``.

    Without splitting this is the ghost polygon stretched by ``m``.  For split
    data (``m = m1 + m2``) the slope-zero part has length ``m1`` for the
    character with s = 0 and ``m2`` for the one with s = p - 2 - a.
    """
    if m < 1:
        raise ValueError("m must be positive")
    if split and (m1 < 0 or m2 < 0 or m1 + m2 != m):
        raise ValueError(f"split data needs m = m' + m'' (got {m} != {m1} + {m2})")
    base = ghost_np(ctx, w, -(-count // m) + 1)
    if not split:
        return stretch(base, m)
    if ctx.s_eps == 0:
        zero_len = m1
    elif ctx.s_eps == ctx.p - 2 - ctx.a:
        zero_len = m2
    else:
        return stretch(base, m)
    rest = [s for s in base.slopes() if s != 0]
    return NewtonPolygon.from_slopes([0] * zero_len + [s for s in rest for _ in range(m)])
