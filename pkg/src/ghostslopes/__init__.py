"""Exact ghost series for reducible generic local data, their Newton polygons, and checks of the slope theorems."""

from .ghost import (
    GhostCoefficient,
    GhostContext,
    companion,
    companion_relation,
    d_iw,
    d_new,
    d_ur,
    ghost_coefficient,
    ghost_degree,
    kbullet,
    multiplicity,
    weight,
)
from .newton import NewtonPolygon, StabilityError, WeightPoint, ghost_np, ghost_valuations, global_np, hull
from .padic import INF, format_rat, parse_rat, vp_int, vp_rat
from .verdict import Verdict

__version__ = "0.1.0"

__all__ = [
    "GhostCoefficient",
    "GhostContext",
    "companion",
    "companion_relation",
    "d_iw",
    "d_new",
    "d_ur",
    "ghost_coefficient",
    "ghost_degree",
    "kbullet",
    "multiplicity",
    "weight",
    "NewtonPolygon",
    "StabilityError",
    "WeightPoint",
    "ghost_np",
    "ghost_valuations",
    "global_np",
    "hull",
    "INF",
    "format_rat",
    "parse_rat",
    "vp_int",
    "vp_rat",
    "Verdict",
]
