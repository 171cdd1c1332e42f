"""Independent reference implementations used only by the tests."""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

from switchmax.rng import SplitMix64


def pairwise_extreme_points(points):
    """Vertices of a planar integer point set by checking every ordered pair.

    (p, q) is a hull edge when no point lies strictly right of the line
    p -> q and every point on that line sits inside the closed segment.  The
    endpoints of hull edges are exactly the vertices.  O(|S|^3), int64.
    """
    P = np.unique(np.asarray(points, dtype=np.int64).reshape(-1, 2), axis=0)
    if len(P) == 1:
        return {tuple(int(v) for v in P[0])}
    out = set()
    for i, p in enumerate(P):
        D = P - p                                   # r - p for every r
        C = D[:, None, 0] * D[None, :, 1] - D[:, None, 1] * D[None, :, 0]   # (q - p) x (r - p)
        dots = D @ D.T                              # (q - p) . (r - p)
        lens = np.einsum("ij,ij->i", D, D)          # |q - p|^2
        on_line = C == 0
        inside = (dots >= 0) & (dots <= lens[:, None])
        edge = np.all(C >= 0, axis=1) & np.all(~on_line | inside, axis=1)
        edge[i] = False
        if edge.any():
            out.add(tuple(int(v) for v in p))
    return out


def random_point_set(rng: SplitMix64, size: int, bound: int = 40):
    """Integer points with injected duplicates and collinear runs."""
    pts = []
    while len(pts) < size:
        r = rng.random()
        if pts and r < 0.2:
            pts.append(rng.choice(pts))
        elif r < 0.4:
            x0, y0 = rng.randint(-bound, bound), rng.randint(-bound, bound)
            dx, dy = rng.randint(-3, 3), rng.randint(-3, 3)
            for t in range(rng.randint(2, 8)):
                pts.append((x0 + t * dx, y0 + t * dy))
        else:
            pts.append((rng.randint(-bound, bound), rng.randint(-bound, bound)))
    pts = pts[:size]
    rng.shuffle(pts)
    return pts


def enumerate_states(matrices, a, K):
    """Every (sequence, x(K)) by plain recursion over Fractions."""
    mats = [[[Fraction(v) for v in row] for row in M] for M in matrices]
    out = []
    for seq in itertools.product(range(len(mats)), repeat=K):
        x = [Fraction(v) for v in a]
        for s in seq:
            x = [sum(r * v for r, v in zip(row, x)) for row in mats[s]]
        out.append((seq, tuple(x)))
    return out


def max_satisfiable(formula):
    """Largest number of simultaneously satisfiable clauses, by enumeration."""
    return max(formula.satisfied_count(bits)
               for bits in itertools.product((False, True), repeat=formula.num_vars))


def random_cnf(rng: SplitMix64, max_vars: int = 4, max_clauses: int = 6):
    from switchmax.reductions import CnfFormula

    n = rng.randint(3, max_vars)
    m = rng.randint(1, max_clauses)
    clauses = []
    for _ in range(m):
        vs = list(range(1, n + 1))
        rng.shuffle(vs)
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in vs[:3]))
    return CnfFormula(n, tuple(clauses))
