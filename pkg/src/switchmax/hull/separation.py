"""Extreme points in any dimension by linear-programming separation.

A point ``p_j`` of a finite set ``S`` is extreme exactly when the LP::

    v* = max  p_j.z - z0
         s.t. p_i.z - z0 <= 0   (i != j)
              p_j.z - z0 <= 1

has ``v* > 0``.  ``lp_separation`` solves it through its dual, the convex
combination LP ``min mu : sum_i lam_i p_i + mu p_j = p_j, sum lam + mu = 1``,
and reads the separating hyperplane off the dual multipliers.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm

import numpy as np

from ._phase1 import float_membership
from .lp import LpError, LpProblem, feasibility, lp_solve


class SeparationError(RuntimeError):
    """An LP failed in float mode; the point's status is unknown."""

    def __init__(self, message, index=None):
        self.index = index
        super().__init__(message if index is None else f"point {index}: {message}")


@dataclass(frozen=True)
class Tolerance:
    """Float tolerances; exact inputs ignore them."""

    cross: float = 1e-9
    extreme: float = 1e-9


DEFAULT_TOLERANCE = Tolerance()


@dataclass(frozen=True)
class SeparationCertificate:
    z: tuple
    z0: object
    value: object

    @property
    def extreme(self) -> bool:
        return self.value > 0


@dataclass
class HullStats:
    lp_calls: int = 0
    exact_fallbacks: int = 0
    direct_checks: int = 0
    extra: dict = field(default_factory=dict)


def _is_exact(points) -> bool:
    return not any(isinstance(v, float) for p in points for v in p)


def lp_separation(points, j, tol: Tolerance = DEFAULT_TOLERANCE) -> SeparationCertificate:
    """Decide whether ``points[j]`` is extreme; return the LP optimum and a
    hyperplane ``z.x = z0`` attaining it."""
    pts = [tuple(p) for p in points]
    if not 0 <= j < len(pts):
        raise IndexError(f"index {j} out of range for {len(pts)} points")
    pj = pts[j]
    if any(p == pj for i, p in enumerate(pts) if i != j):
        raise ValueError("lp_separation needs a duplicate-free point set")
    exact = _is_exact(pts)
    n = len(pj)
    others = [p for i, p in enumerate(pts) if i != j]
    one = 1 if exact else 1.0
    cols = others + [pj]
    A_eq = [[p[r] for p in cols] for r in range(n)] + [[one] * len(cols)]
    b_eq = list(pj) + [one]
    c = [0] * len(others) + [-one]
    try:
        sol = lp_solve(LpProblem(c=c, A_eq=A_eq, b_eq=b_eq), eps=tol.extreme * 1e-2)
    except LpError as exc:
        raise SeparationError(str(exc), j) from exc
    if not sol.optimal:
        # always feasible (mu = 1) and bounded (mu >= 0)
        raise SeparationError(f"separation LP reported {sol.status}", j)
    y = sol.duals_eq
    z = tuple(-v for v in y[:n])
    z0 = y[n]
    value = -sol.objective
    if not exact:
        z = tuple(float(v) for v in z)
        z0, value = float(z0), float(value)
    return SeparationCertificate(z, z0, value)


# --- fast engine ------------------------------------------------------------


def integerize(points):
    """Scale exact points by the lcm of their denominators; returns int tuples."""
    if all(type(v) is int for p in points for v in p):
        return [tuple(p) for p in points]
    L = 1
    for p in points:
        for v in p:
            L = lcm(L, Fraction(v).denominator)
    return [tuple(int(Fraction(v) * L) for v in p) for p in points]


def _floats(int_points):
    M = max((abs(v) for p in int_points for v in p), default=1) or 1
    return np.array([[v / M for v in p] for p in int_points], dtype=float)


def _solve_exact_small(cols, rhs):
    """Exact solution of ``sum_k lam_k cols[k] = rhs`` for integer data, with
    non-pivot unknowns set to 0; ``None`` if the system is inconsistent.

    Fraction-free Gauss-Jordan: rows stay integral and are kept primitive.
    """
    rows = len(rhs)
    k = len(cols)
    aug = [[cols[c][r] for c in range(k)] + [rhs[r]] for r in range(rows)]
    pivots = []
    r = 0
    for c in range(k):
        piv = next((i for i in range(r, rows) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        prow = aug[r]
        p = prow[c]
        for i in range(rows):
            f = aug[i][c]
            if i != r and f != 0:
                row = [p * a - f * b for a, b in zip(aug[i], prow)]
                g = gcd(*row)
                aug[i] = [v // g for v in row] if g > 1 else row
        pivots.append(c)
        r += 1
        if r == rows:
            break
    if any(aug[i][-1] != 0 for i in range(r, rows)):
        return None
    lam = [Fraction(0)] * k
    for i, c in enumerate(pivots):
        lam[c] = Fraction(aug[i][-1], aug[i][c])
    return lam


class _Engine:
    """Output-sensitive extreme-point search (Clarkson's scheme).

    A growing set ``R`` of certified vertices is kept.  Each remaining point is
    tested for membership in ``conv(R)``: inside means not extreme; outside
    yields a direction whose maximizer over the whole set is a new vertex.
    In exact mode every float answer is re-checked with integer arithmetic
    and the exact simplex is used whenever a check fails.
    """

    def __init__(self, points, exact, tol, stats):
        self.exact = exact
        self.tol = tol
        self.stats = stats
        self.n = len(points[0])
        if exact:
            self.P = integerize(points)
            self.F = _floats(self.P)
        else:
            self.P = [tuple(float(v) for v in p) for p in points]
            arr = np.array(self.P, dtype=float)
            M = np.abs(arr).max() or 1.0
            self.F = arr / M
        self.N = len(points)
        self.in_R = [False] * self.N
        self.R = []

    # maximizer of z over all points, lexicographic tie-break -> a vertex
    def argmax_vertex(self, z):
        if self.exact:
            vals = [sum(a * b for a, b in zip(z, p)) for p in self.P]
            best = max(vals)
            face = [i for i, v in enumerate(vals) if v == best]
        else:
            vals = self.F @ np.asarray(z, dtype=float)
            best = vals.max()
            face = np.flatnonzero(vals == best).tolist()
        return max(face, key=lambda i: self.P[i])

    def add(self, i):
        if not self.in_R[i]:
            self.in_R[i] = True
            self.R.append(i)

    def seed(self):
        n = self.n
        rng = random.Random(0x5EED)
        dirs = []
        for i in range(n):
            e = [0] * n
            e[i] = 1
            dirs.append(e)
            dirs.append([-v for v in e])
        for _ in range(4 * n + 4):
            dirs.append([rng.randint(-1000, 1000) for _ in range(n)])
        for d in dirs:
            self.add(self.argmax_vertex(d))

    def membership(self, j):
        """('in', None) or ('out', z) for points[j] against conv(R)."""
        self.stats.lp_calls += 1
        R = self.R
        n = self.n
        A = np.ones((n + 1, len(R)), dtype=float)
        A[:n] = self.F[R].T
        b = np.ones(n + 1, dtype=float)
        b[:n] = self.F[j]
        try:
            lam, y = float_membership(A, b, infeas_tol=self.tol.extreme)
        except LpError:
            lam, y = None, None
            if not self.exact:
                raise
        if not self.exact:
            if lam is not None:
                return "in", None
            return "out", -y[:n]
        if lam is not None:
            support = [k for k in range(len(R)) if lam[k] > 1e-12]
            cols = [self.P[R[k]] + (1,) for k in support]
            exact_lam = _solve_exact_small(cols, self.P[j] + (1,))
            if exact_lam is not None and all(v >= 0 for v in exact_lam):
                return "in", None
        elif y is not None:
            z = -y[:n]
            zmax = np.abs(z).max()
            if zmax > 0:
                zi = [int(round(v / zmax * 2 ** 40)) for v in z]
                pj = self.P[j]
                top = sum(a * b for a, b in zip(zi, pj))
                if all(sum(a * b for a, b in zip(zi, self.P[r])) < top for r in R):
                    return "out", zi
        return self.membership_exact(j)

    def membership_exact(self, j):
        self.stats.exact_fallbacks += 1
        R = self.R
        n = self.n
        A = np.empty((n + 1, len(R)), dtype=object)
        for k, r in enumerate(R):
            A[:n, k] = self.P[r]
            A[n, k] = 1
        b = np.array(list(self.P[j]) + [1], dtype=object)
        lam, y = feasibility(A, b, exact=True)
        if lam is not None:
            return "in", None
        z = [-Fraction(v) for v in y[:n]]
        L = 1
        for v in z:
            L = lcm(L, v.denominator)
        return "out", [int(v * L) for v in z]

    def run(self):
        if self.N == 1:
            return [0]
        self.seed()
        for j in range(self.N):
            if self.in_R[j]:
                continue
            for _ in range(self.N + 1):
                verdict, z = self.membership(j)
                if verdict == "in":
                    break
                v = self.argmax_vertex(z)
                if v == j:
                    self.add(j)
                    break
                if self.in_R[v]:
                    # float disagreement between LP and argmax: ask LP (7) directly
                    self.stats.direct_checks += 1
                    cert = lp_separation(self.P, j, self.tol)
                    if cert.value > self.tol.extreme:
                        self.add(j)
                    break
                self.add(v)
            else:
                raise SeparationError("vertex search did not converge", j)
        return self.R


def extreme_indices_lp(points, tol: Tolerance = DEFAULT_TOLERANCE, method: str = "clarkson", stats=None):
    """Indices (into the duplicate-free ``points``) of the extreme points."""
    stats = stats if stats is not None else HullStats()
    if not points:
        raise ValueError("empty point set")
    if method == "direct":
        out = []
        for j in range(len(points)):
            stats.lp_calls += 1
            if lp_separation(points, j, tol).value > (0 if _is_exact(points) else tol.extreme):
                out.append(j)
        return out
    if method != "clarkson":
        raise ValueError(f"unknown method {method!r}")
    return sorted(_Engine(points, _is_exact(points), tol, stats).run())


def extreme_points_lp(points, tol: Tolerance = DEFAULT_TOLERANCE, method: str = "clarkson", stats=None):
    """Extreme points of ``conv(points)`` in lexicographic order, any dimension.

    ``method="direct"`` solves the separation LP once per point;
    ``"clarkson"`` (default) returns the same set with far fewer exact LPs.
    """
    pts = list(dict.fromkeys(tuple(p) for p in points))
    if not pts:
        raise ValueError("empty point set")
    idx = extreme_indices_lp(pts, tol, method, stats)
    return sorted(pts[i] for i in idx)
