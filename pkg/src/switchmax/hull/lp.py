"""Dense tableau simplex with Bland's rule.

Works over :class:`~fractions.Fraction` (exact pivoting, no rounding) or
over binary64 floats with tolerances.  Problems are stated as::

    maximize    c x
    subject to  A_ub x <= b_ub
                A_eq x == b_eq
                x_j >= 0 unless free[j]
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

OPTIMAL = "optimal"
UNBOUNDED = "unbounded"
INFEASIBLE = "infeasible"

FLOAT_EPS = 1e-10


class LpError(RuntimeError):
    """The simplex failed to reach a verdict (float mode only)."""


@dataclass
class LpProblem:
    c: Sequence
    A_ub: Sequence[Sequence] = ()
    b_ub: Sequence = ()
    A_eq: Sequence[Sequence] = ()
    b_eq: Sequence = ()
    free: Optional[Sequence[bool]] = None

    @property
    def num_vars(self) -> int:
        return len(self.c)

    @property
    def exact(self) -> bool:
        values = list(self.c) + list(self.b_ub) + list(self.b_eq)
        values += [v for row in self.A_ub for v in row] + [v for row in self.A_eq for v in row]
        return not any(isinstance(v, float) for v in values)


@dataclass
class LpSolution:
    status: str
    x: Optional[tuple] = None
    objective: object = None
    duals_ub: Optional[tuple] = None
    duals_eq: Optional[tuple] = None
    farkas_ub: Optional[tuple] = None
    farkas_eq: Optional[tuple] = None
    iterations: int = 0
    residual: Optional[float] = None

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


class _Tableau:
    """Rows of ``B^-1 [A | b]`` plus a reduced-profit row ``d``."""

    def __init__(self, T, basis, exact, eps):
        self.T = T
        self.basis = basis
        self.exact = exact
        self.eps = eps
        self.iterations = 0

    def set_objective(self, cost):
        T = self.T
        cb = cost[self.basis]
        d = np.empty(T.shape[1], dtype=T.dtype)
        d[:-1] = cost - cb @ T[:, :-1]
        d[-1] = -(cb @ T[:, -1])
        self.d = d

    def pivot(self, row, col):
        T = self.T
        T[row] = T[row] / T[row, col]
        colv = T[:, col].copy()
        colv[row] = 0
        nz = np.flatnonzero(colv != 0)
        if len(nz):
            T[nz] -= np.outer(colv[nz], T[row])
        self.d = self.d - self.d[col] * T[row]
        self.basis[row] = col
        self.iterations += 1

    def entering(self, allowed):
        cand = np.flatnonzero(self.d[:allowed] > self.eps)
        return int(cand[0]) if len(cand) else None

    def leaving(self, col):
        T, eps = self.T, self.eps
        colv = T[:, col]
        rows = np.flatnonzero(colv > eps)
        if not len(rows):
            return None
        ratios = T[rows, -1] / colv[rows]
        if self.exact:
            best = min(ratios)
            tied = rows[[r == best for r in ratios]]
        else:
            best = ratios.min()
            tied = rows[ratios <= best + eps * (1.0 + abs(best))]
        return int(min(tied, key=lambda r: self.basis[r]))

    def run(self, allowed, max_iter):
        while True:
            col = self.entering(allowed)
            if col is None:
                return OPTIMAL
            row = self.leaving(col)
            if row is None:
                return UNBOUNDED
            self.pivot(row, col)
            if self.iterations > max_iter:
                raise LpError(f"simplex exceeded {max_iter} pivots")


def lp_solve(problem: LpProblem, eps: float = FLOAT_EPS, max_iter: int = 100000) -> LpSolution:
    """Solve ``problem`` by two-phase simplex with Bland's anti-cycling rule.

    Exact problems (no float data) are pivoted over rationals and return exact
    optima and exact dual multipliers.  Infeasible problems carry a Farkas
    certificate ``y`` with ``y A_j >= 0`` on every non-negative column and
    ``y b < 0``.
    """
    exact = problem.exact
    eps = 0 if exact else eps
    nv = problem.num_vars
    free = list(problem.free) if problem.free is not None else [False] * nv
    if len(free) != nv:
        raise ValueError("free mask has the wrong length")
    n_ub, n_eq = len(problem.b_ub), len(problem.b_eq)
    nrows = n_ub + n_eq

    # split free columns: x = x+ - x-
    col_map = []
    for j in range(nv):
        col_map.append((j, 1))
        if free[j]:
            col_map.append((j, -1))
    ns = len(col_map)
    zero = Fraction(0) if exact else 0.0
    one = Fraction(1) if exact else 1.0

    def conv(v):
        return Fraction(v) if exact else float(v)

    rows = [list(r) for r in problem.A_ub] + [list(r) for r in problem.A_eq]
    rhs = [conv(v) for v in list(problem.b_ub) + list(problem.b_eq)]
    # columns: structural | slacks (one per ub row) | artificials (as needed)
    sign = []
    needs_art = []
    for i in range(nrows):
        s = -1 if rhs[i] < 0 else 1
        sign.append(s)
        needs_art.append(i >= n_ub or s < 0)
    n_art = sum(needs_art)
    ncols = ns + n_ub + n_art
    dtype = object if exact else float
    T = np.empty((nrows, ncols + 1), dtype=dtype)
    T[...] = zero
    basis = [0] * nrows
    init_cols = [0] * nrows
    a = 0
    for i in range(nrows):
        s = sign[i]
        for k, (j, sg) in enumerate(col_map):
            v = rows[i][j]
            if v:
                T[i, k] = conv(v) * (s * sg)
        if i < n_ub:
            T[i, ns + i] = one * s
        T[i, -1] = rhs[i] * s
        if needs_art[i]:
            col = ns + n_ub + a
            T[i, col] = one
            a += 1
        else:
            col = ns + i
        basis[i] = col
        init_cols[i] = col

    tab = _Tableau(T, basis, exact, eps)
    allowed = ns + n_ub
    y1 = None
    if n_art:
        cost1 = np.empty(ncols, dtype=dtype)
        cost1[...] = zero
        cost1[ns + n_ub:] = -one
        tab.set_objective(cost1)
        tab.run(ncols, max_iter)
        phase1 = -tab.d[-1]
        cb = cost1[tab.basis]
        y1 = cb @ T[:, init_cols]
        if phase1 < -(eps * 10 if not exact else 0):
            y = tuple(v * s for v, s in zip(y1, sign))
            return LpSolution(INFEASIBLE, farkas_ub=y[:n_ub], farkas_eq=y[n_ub:],
                              iterations=tab.iterations)
        # drive artificials out of the basis where possible
        for r in range(nrows):
            if tab.basis[r] >= allowed:
                cand = np.flatnonzero(abs(T[r, :allowed]) > eps) if not exact else \
                    [j for j in range(allowed) if T[r, j] != 0]
                if len(cand):
                    tab.pivot(r, int(cand[0]))

    cost = np.empty(ncols, dtype=dtype)
    cost[...] = zero
    for k, (j, sg) in enumerate(col_map):
        cost[k] = conv(problem.c[j]) * sg
    tab.set_objective(cost)
    status = tab.run(allowed, max_iter)
    if status == UNBOUNDED:
        return LpSolution(UNBOUNDED, iterations=tab.iterations)

    xs = [zero] * ncols
    for r, b in enumerate(tab.basis):
        xs[b] = T[r, -1]
    x = [zero] * nv
    for k, (j, sg) in enumerate(col_map):
        x[j] = x[j] + xs[k] * sg
    objective = -tab.d[-1]
    y = cost[tab.basis] @ T[:, init_cols]
    y = tuple(v * s for v, s in zip(y, sign))
    sol = LpSolution(OPTIMAL, x=tuple(x), objective=objective, duals_ub=y[:n_ub], duals_eq=y[n_ub:],
                     iterations=tab.iterations)
    if not exact:
        sol.residual = _residual(problem, x, free)
        sol.x = tuple(float(v) for v in x)
        sol.objective = float(objective)
        sol.duals_ub = tuple(float(v) for v in sol.duals_ub)
        sol.duals_eq = tuple(float(v) for v in sol.duals_eq)
    return sol


def _residual(problem, x, free):
    worst = 0.0
    for row, b in zip(problem.A_ub, problem.b_ub):
        worst = max(worst, sum(float(a) * v for a, v in zip(row, x)) - float(b))
    for row, b in zip(problem.A_eq, problem.b_eq):
        worst = max(worst, abs(sum(float(a) * v for a, v in zip(row, x)) - float(b)))
    for v, f in zip(x, free):
        if not f:
            worst = max(worst, -v)
    return worst


def feasibility(A_eq, b_eq, exact: bool, eps: float = FLOAT_EPS, max_iter: int = 100000,
                infeas_tol: Optional[float] = None):
    """Phase one only: find ``x >= 0`` with ``A_eq x = b_eq``.

    Returns ``(x, None)`` when feasible or ``(None, y)`` with a Farkas
    certificate ``y A >= 0, y b < 0`` otherwise.  ``A_eq`` is an array of
    shape (rows, cols); it is not modified.
    """
    if exact:
        A = np.array([[Fraction(v) for v in row] for row in A_eq], dtype=object)
        b = np.array([Fraction(v) for v in b_eq], dtype=object)
    else:
        A = np.asarray(A_eq, dtype=float)
        b = np.asarray(b_eq, dtype=float)
    nrows, ncols = A.shape
    eps = 0 if exact else eps
    if infeas_tol is None:
        infeas_tol = 0 if exact else 10 * eps
    sign = np.where(b < 0, -1, 1)
    T = np.empty((nrows, ncols + nrows + 1), dtype=A.dtype)
    T[:, :ncols] = A * sign[:, None]
    T[:, ncols:ncols + nrows] = 0
    for i in range(nrows):
        T[i, ncols + i] = 1
    T[:, -1] = b * sign
    basis = list(range(ncols, ncols + nrows))
    tab = _Tableau(T, basis, exact, eps)
    cost = np.zeros(ncols + nrows, dtype=A.dtype)
    cost[ncols:] = -1
    tab.set_objective(cost)
    tab.run(ncols + nrows, max_iter)
    value = -tab.d[-1]
    if value < -infeas_tol:
        y = cost[tab.basis] @ T[:, ncols:ncols + nrows]
        return None, y * sign
    x = np.zeros(ncols, dtype=A.dtype)
    for r, bcol in enumerate(tab.basis):
        if bcol < ncols:
            x[bcol] = T[r, -1]
    return x, None
