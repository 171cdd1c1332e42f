"""Compiled float Phase I for the membership tests of the extreme-point engine.

Same tableau, pivoting rule (Bland) and tolerances as
:func:`switchmax.hull.lp.feasibility` in float mode; only the interpreter
overhead per pivot is gone.  Falls back to the numpy version when numba is
not importable.
"""

import numpy as np

from .lp import FLOAT_EPS, LpError, feasibility

try:
    import numba
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None


def _phase1(A, b, eps, infeas_tol, max_iter):
    nrows, ncols = A.shape
    width = ncols + nrows
    T = np.zeros((nrows, width + 1))
    sign = np.ones(nrows)
    for i in range(nrows):
        if b[i] < 0:
            sign[i] = -1.0
        for j in range(ncols):
            T[i, j] = A[i, j] * sign[i]
        T[i, ncols + i] = 1.0
        T[i, width] = b[i] * sign[i]
    basis = np.empty(nrows, dtype=np.int64)
    for i in range(nrows):
        basis[i] = ncols + i
    # reduced profits for maximize -sum(artificials)
    d = np.zeros(width + 1)
    for j in range(width + 1):
        s = 0.0
        for i in range(nrows):
            s += T[i, j]
        d[j] = s
    for i in range(nrows):
        d[ncols + i] = 0.0
    it = 0
    while True:
        col = -1
        for j in range(width):
            if d[j] > eps:
                col = j
                break
        if col < 0:
            break
        row = -1
        best = 0.0
        for i in range(nrows):
            if T[i, col] > eps:
                r = T[i, width] / T[i, col]
                if row < 0 or r < best:
                    best = r
                    row = i
        if row < 0:
            return 2, np.zeros(ncols), np.zeros(nrows)   # cannot happen in Phase I
        lim = best + eps * (1.0 + abs(best))
        for i in range(nrows):
            if T[i, col] > eps and T[i, width] / T[i, col] <= lim and basis[i] < basis[row]:
                row = i
        piv = T[row, col]
        for j in range(width + 1):
            T[row, j] /= piv
        for i in range(nrows):
            if i != row:
                f = T[i, col]
                if f != 0.0:
                    for j in range(width + 1):
                        T[i, j] -= f * T[row, j]
        f = d[col]
        for j in range(width + 1):
            d[j] -= f * T[row, j]
        basis[row] = col
        it += 1
        if it > max_iter:
            return 3, np.zeros(ncols), np.zeros(nrows)
    value = -d[width]
    if value < -infeas_tol:
        y = np.zeros(nrows)
        for i in range(nrows):
            if basis[i] >= ncols:
                for k in range(nrows):
                    y[k] -= T[i, ncols + k]
        for k in range(nrows):
            y[k] *= sign[k]
        return 1, np.zeros(ncols), y
    x = np.zeros(ncols)
    for i in range(nrows):
        if basis[i] < ncols:
            x[basis[i]] = T[i, width]
    return 0, x, np.zeros(nrows)


if numba is not None:
    _compiled = numba.njit(cache=True)(_phase1)
else:  # pragma: no cover
    _compiled = None


def float_membership(A, b, infeas_tol, eps=FLOAT_EPS, max_iter=100000):
    """``(x, None)`` if ``A x = b`` has a solution ``x >= 0``, else ``(None, y)``
    with ``y`` a Farkas vector, for a float matrix ``A``."""
    if _compiled is None:
        return feasibility(A, b, exact=False, eps=eps, max_iter=max_iter, infeas_tol=infeas_tol)
    status, x, y = _compiled(np.ascontiguousarray(A, dtype=np.float64), np.asarray(b, dtype=np.float64),
                             float(eps), float(infeas_tol), int(max_iter))
    if status == 0:
        return x, None
    if status == 1:
        return None, y
    raise LpError("Phase I did not terminate" if status == 3 else "Phase I reported an unbounded ray")
