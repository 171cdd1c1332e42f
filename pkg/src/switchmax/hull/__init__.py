"""Extreme points of finite point sets."""

from .lp import INFEASIBLE, OPTIMAL, UNBOUNDED, LpError, LpProblem, LpSolution, feasibility, lp_solve
from .planar import cross, extreme_points_2d, graham_order
from .separation import (
    DEFAULT_TOLERANCE,
    HullStats,
    SeparationCertificate,
    SeparationError,
    Tolerance,
    extreme_indices_lp,
    extreme_points_lp,
    integerize,
    lp_separation,
)


def extreme_points(points, tol=DEFAULT_TOLERANCE, engine="auto", method="clarkson", stats=None):
    """Extreme points of ``conv(points)``, duplicates removed.

    ``engine="graham"`` (planar only) returns them counter-clockwise;
    ``engine="lp"`` returns them in lexicographic order; ``"auto"`` picks
    Graham for two-dimensional input.
    """
    pts = list(dict.fromkeys(tuple(p) for p in points))
    if not pts:
        raise ValueError("empty point set")
    dim = len(pts[0])
    if any(len(p) != dim for p in pts):
        raise ValueError("points have mixed dimensions")
    if engine == "auto":
        engine = "graham" if dim == 2 else "lp"
    if engine == "graham":
        exact = not any(isinstance(v, float) for p in pts for v in p)
        return extreme_points_2d(pts, 0 if exact else tol.cross)
    if engine == "lp":
        return extreme_points_lp(pts, tol, method, stats)
    raise ValueError(f"unknown engine {engine!r}")
