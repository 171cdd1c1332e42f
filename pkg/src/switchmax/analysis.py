"""Vertex-growth instrumentation for switched linear systems.

Everything here works in exact arithmetic unless stated otherwise: traces of
N_k = |ext P_k|, the quadrant classification E^0..E^4 of planar vertices,
counts of reachable points in the off-diagonal quadrants, similarity
transforms, and checkers for the explicit growth bounds of the binary pair
catalog and of a few structured matrix families.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .core import (
    EXACT,
    InstanceSpec,
    determinant,
    make_instance,
    mat_inverse,
    mat_mul,
    mat_vec,
    matrix,
    vector,
)
from .hull import graham_order
from .rng import SplitMix64
from .solver import Layer, SolverOptions, _Walker, iter_layers, reachable_sets

# --- binary pair catalog ----------------------------------------------------

A1 = matrix([[0, 1], [1, 0]])
A2 = matrix([[1, 1], [0, 1]])
A3 = matrix([[1, 0], [1, 1]])
A4 = matrix([[1, 1], [1, 0]])
A5 = matrix([[0, 1], [1, 1]])
CATALOG = {"A1": A1, "A2": A2, "A3": A3, "A4": A4, "A5": A5}
PAIRS = {1: ("A1", "A2"), 2: ("A1", "A4"), 3: ("A2", "A3"), 4: ("A4", "A5"), 5: ("A2", "A4")}


def pair(index: int):
    """Matrices of the catalog pair ``Sigma_index`` (1..5)."""
    if index not in PAIRS:
        raise ValueError(f"no catalog pair {index}; choose 1..5")
    return tuple(CATALOG[name] for name in PAIRS[index])


def pair_instance(index: int, a, K: int) -> InstanceSpec:
    return make_instance(pair(index), a, K)


# --- traces -----------------------------------------------------------------


@dataclass(frozen=True)
class NkTrace:
    instance_id: str
    counts: Tuple[int, ...]

    def pairs(self):
        return list(enumerate(self.counts))

    def __getitem__(self, k):
        return self.counts[k]

    def __len__(self):
        return len(self.counts)


def trace_nk(instance: InstanceSpec, K: Optional[int] = None, options: SolverOptions = SolverOptions(),
             instance_id: str = "") -> NkTrace:
    """N_0..N_K computed by the solver's layer machinery (objective ignored)."""
    K = instance.K if K is None else K
    walker = _Walker(instance, options)
    counts = [len(walker.Y)]
    for _ in range(K):
        walker.step()
        counts.append(len(walker.Y))
    return NkTrace(instance_id, tuple(counts))


def nk_csv(trace: NkTrace) -> str:
    lines = ["k,N_k"] + [f"{k},{n}" for k, n in trace.pairs()]
    return "\n".join(lines) + "\n"


def fit_growth_exponent(trace: NkTrace, k_min: int = 2) -> float:
    """Slope of log N_k against log k over k >= k_min (least squares)."""
    ks = [k for k in range(max(k_min, 1), len(trace))]
    if len(ks) < 2:
        raise ValueError("need at least two points to fit an exponent")
    slope, _ = np.polyfit(np.log(ks), np.log([trace[k] for k in ks]), 1)
    return float(slope)


# --- quadrant classification ------------------------------------------------

# open quadrant i is spanned by (s1*e1, s2*e2)
QUADRANT_SIGNS = {1: (1, 1), 2: (-1, 1), 3: (-1, -1), 4: (1, -1)}
AXES = ((1, 0), (0, 1), (-1, 0), (0, -1))


@dataclass(frozen=True)
class VertexClassification:
    """``sets[i]`` lists the vertices in E^i, i = 0..4; the sets may overlap."""

    vertices: Tuple[tuple, ...]
    sets: Tuple[Tuple[tuple, ...], ...]

    def counts(self):
        return tuple(len(s) for s in self.sets)

    def __getitem__(self, i):
        return self.sets[i]


def _cross2(u, v):
    return u[0] * v[1] - u[1] * v[0]


def _in_open_quadrant(v, q):
    s1, s2 = QUADRANT_SIGNS[q]
    return s1 * v[0] > 0 and s2 * v[1] > 0


def _cone_contains(u, w, d):
    # cone from u counter-clockwise to w, opening angle below pi
    return _cross2(u, d) >= 0 and _cross2(d, w) >= 0


def normal_cones(points) -> List[Tuple[tuple, tuple, tuple]]:
    """``(vertex, u, w)`` per vertex in counter-clockwise order, where the
    outer normal cone is spanned counter-clockwise from ``u`` to ``w``.

    Only meaningful for polygons with at least three vertices."""
    ring = [points[i] for i in graham_order(points, 0)]
    h = len(ring)
    out = []
    for i, v in enumerate(ring):
        prev, nxt = ring[i - 1], ring[(i + 1) % h]
        u = (v[1] - prev[1], prev[0] - v[0])
        w = (nxt[1] - v[1], v[0] - nxt[0])
        out.append((v, u, w))
    return out


def classify_vertices(layer) -> VertexClassification:
    """Split the vertices of a planar layer into E^0..E^4.

    A vertex is in E^i (i = 1..4) when it maximizes ``c.x`` for some ``c`` in
    the open quadrant i, and in E^0 when it maximizes some axis direction.
    """
    pts = list(layer.vertices) if isinstance(layer, Layer) else [tuple(p) for p in layer]
    pts = list(dict.fromkeys(pts))
    if not pts:
        raise ValueError("empty layer")
    if any(len(p) != 2 for p in pts):
        raise ValueError("classification is defined for planar layers only")
    sets = [[] for _ in range(5)]
    ring = [pts[i] for i in graham_order(pts, 0)]
    if len(ring) != len(pts):
        raise ValueError("layer contains points that are not hull vertices")
    if len(ring) == 1:
        return VertexClassification(tuple(ring), tuple((ring[0],) for _ in range(5)))
    if len(ring) == 2:
        for v, other in ((ring[0], ring[1]), (ring[1], ring[0])):
            d = (v[0] - other[0], v[1] - other[1])
            sets[0].append(v)  # d != 0, so some axis direction has c.d >= 0
            for q, (s1, s2) in QUADRANT_SIGNS.items():
                a, b = s1 * d[0], s2 * d[1]
                if a > 0 or b > 0:
                    sets[q].append(v)
        return VertexClassification(tuple(ring), tuple(tuple(s) for s in sets))
    for v, u, w in normal_cones(ring):
        if any(_cone_contains(u, w, e) for e in AXES):
            sets[0].append(v)
        for q, (s1, s2) in QUADRANT_SIGNS.items():
            bisector = (s1, s2)
            if _in_open_quadrant(u, q) or _in_open_quadrant(w, q) or _cone_contains(u, w, bisector):
                sets[q].append(v)
    return VertexClassification(tuple(ring), tuple(tuple(s) for s in sets))


def classification_csv(rows: Sequence[Tuple[int, VertexClassification]]) -> str:
    lines = ["k,e0,e1,e2,e3,e4"]
    for k, cls in rows:
        lines.append(",".join(str(v) for v in (k,) + cls.counts()))
    return "\n".join(lines) + "\n"


def classify_trace(instance: InstanceSpec, K: Optional[int] = None):
    """``(k, VertexClassification)`` for every layer k = 0..K."""
    return [(layer.k, classify_vertices(layer)) for layer in iter_layers(instance, SolverOptions(), K)]


# --- reachable points off the diagonal quadrants -----------------------------


def count_offdiagonal_reachable(instance: InstanceSpec, k: int, cap: int = 2 ** 24) -> int:
    """Number of distinct points of X_k strictly inside quadrant 2 or 4."""
    if instance.n != 2:
        raise ValueError("quadrant counts need n = 2")
    for j, level in reachable_sets(instance, k, cap):
        pass
    return sum(1 for x in level if x[0] * x[1] < 0)


# --- similarity ----------------------------------------------------------------


def similarity_transform(matrices, S):
    """``S A S^-1`` for every A; raises on singular S."""
    S = matrix(S) if not isinstance(S[0][0], Fraction) else S
    if determinant(S) == 0:
        raise ValueError("similarity transform needs a nonsingular S")
    S_inv = mat_inverse(S)
    return tuple(mat_mul(mat_mul(S, A), S_inv) for A in matrices)


def check_similarity_invariance(matrices, S, a, K: int) -> bool:
    """True when N_k(Sigma, a) = N_k(S Sigma S^-1, S a) for every k <= K."""
    S = matrix(S) if not isinstance(S[0][0], Fraction) else S
    mats = tuple(matrix(A) for A in matrices)
    a = vector(a)
    left = trace_nk(make_instance(mats, a, K))
    right = trace_nk(make_instance(similarity_transform(mats, S), mat_vec(S, a), K))
    return left.counts == right.counts


def random_unimodular(rng: SplitMix64, n: int, steps: int = 6, bound: int = 3):
    """Integer matrix with determinant +-1 from random elementary operations."""
    S = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, j = rng.randint(0, n - 1), rng.randint(0, n - 1)
        if i == j:
            S[i] = [-v for v in S[i]]
            continue
        f = rng.randint(-bound, bound)
        S[i] = [x + f * y for x, y in zip(S[i], S[j])]
    return matrix(S)


# --- region sampling ---------------------------------------------------------------

REGIONS = ("Q1", "intQ1", "Q3", "intQ3", "intQ2", "intQ4", "any")


def in_region(a, region: str) -> bool:
    x, y = a
    if (x, y) == (0, 0):
        return False
    return {
        "Q1": x >= 0 and y >= 0,
        "intQ1": x > 0 and y > 0,
        "Q3": x <= 0 and y <= 0,
        "intQ3": x < 0 and y < 0,
        "intQ2": x < 0 < y,
        "intQ4": y < 0 < x,
        "any": True,
    }[region]


def sample_region(rng: SplitMix64, region: str, count: int, bound: int = 20):
    """``count`` distinct integer vectors in [-bound, bound]^2 from ``region``."""
    out = []
    seen = set()
    while len(out) < count:
        a = (rng.randint(-bound, bound), rng.randint(-bound, bound))
        if a in seen or not in_region(a, region):
            continue
        seen.add(a)
        out.append(a)
    return out


# --- growth bounds -------------------------------------------------------------------


@dataclass
class Violation:
    k: int
    quantity: str
    observed: int
    bound: int


@dataclass
class GrowthReport:
    pair: int
    a: tuple
    trace: Tuple[int, ...]
    violations: List[Violation] = field(default_factory=list)
    flagged: List[Violation] = field(default_factory=list)
    classes: List[Tuple[int, ...]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _check(report, bucket, k, quantity, observed, bound):
    if observed > bound:
        bucket.append(Violation(k, quantity, observed, bound))


def check_growth_bounds(pair_index: int, a, K: int) -> GrowthReport:
    """Check the explicit vertex-count bounds for one catalog pair and one a.

    Bounds asserted (k-ranges as in their derivations):

    * pair 1, a in int Q1 or int Q3: N_k <= k^2 + 5k + 3 (k >= 2); for int Q1
      also |E^1_k| <= k + 1 and |E^3_k| <= 2 (k >= 2).  Boundary samples are
      recorded in ``flagged`` instead of ``violations``.
    * pair 2, any a: N_k <= 8k - 12 (k >= 2).
    * pair 3, a in Q1: N_k <= 12k - 6 (k >= 3) and
      E^3_k within {A2^k a, A3^k a} (k >= 1).
    * pair 4, any a: N_k = N_k(pair 3) for even k and N_k <= 2 N_{k-1} for odd k.
    * pair 5, a in Q1: N_k <= 6k + 8.
    """
    a = tuple(a)
    if len(a) != 2:
        raise ValueError("catalog pairs act on the plane")
    if pair_index == 1 and not (in_region(a, "Q1") or in_region(a, "Q3")):
        raise ValueError("pair 1 bounds need a in Q1 or Q3; use fit_growth_exponent elsewhere")
    if pair_index in (3, 5) and not in_region(a, "Q1"):
        raise ValueError(f"pair {pair_index} bounds need a in Q1")
    if pair_index not in PAIRS:
        raise ValueError(f"no catalog pair {pair_index}")
    inst = pair_instance(pair_index, a, K)
    report = GrowthReport(pair_index, a, ())
    trace = []
    if pair_index == 4:
        other = trace_nk(pair_instance(3, a, K)).counts
    A2k = vector(a)
    A3k = vector(a)
    interior = in_region(a, "intQ1") or in_region(a, "intQ3")
    for layer in iter_layers(inst, SolverOptions(), K):
        k = layer.k
        N = len(layer)
        trace.append(N)
        cls = classify_vertices(layer) if pair_index in (1, 3) else None
        if cls is not None:
            report.classes.append(cls.counts())
        if pair_index == 1 and k >= 2:
            bucket = report.violations if interior else report.flagged
            _check(report, bucket, k, "N_k", N, k * k + 5 * k + 3)
            if in_region(a, "intQ1"):
                _check(report, bucket, k, "|E1_k|", len(cls[1]), k + 1)
                _check(report, bucket, k, "|E3_k|", len(cls[3]), 2)
        elif pair_index == 2 and k >= 2:
            _check(report, report.violations, k, "N_k", N, 8 * k - 12)
        elif pair_index == 3:
            if k >= 3:
                _check(report, report.violations, k, "N_k", N, 12 * k - 6)
            if k >= 1:
                extra = [v for v in cls[3] if v not in (A2k, A3k)]
                if extra:
                    report.violations.append(Violation(k, "E3_k outside {A2^k a, A3^k a}", len(extra), 0))
        elif pair_index == 4:
            if k % 2 == 0:
                if N != other[k]:
                    report.violations.append(Violation(k, "N_k(pair 4) = N_k(pair 3)", N, other[k]))
            else:
                _check(report, report.violations, k, "N_k", N, 2 * trace[k - 1])
        elif pair_index == 5:
            _check(report, report.violations, k, "N_k", N, 6 * k + 8)
        A2k = mat_vec(A2, A2k)
        A3k = mat_vec(A3, A3k)
    report.trace = tuple(trace)
    return report


def check_offdiagonal_bound(a, k_max: int) -> List[Violation]:
    """Pair 1 with a in int Q4: at most 4k + 4 reachable points in int Q2 u int Q4."""
    if not in_region(tuple(a), "intQ4"):
        raise ValueError("the off-diagonal count bound needs a in int Q4")
    inst = pair_instance(1, a, k_max)
    out = []
    for k, level in reachable_sets(inst, k_max):
        c = sum(1 for x in level if x[0] * x[1] < 0)
        if c > 4 * k + 4:
            out.append(Violation(k, "|X_k in int Q2 u int Q4|", c, 4 * k + 4))
    return out


# --- structured families ------------------------------------------------------------

FAMILIES = ("rank-one", "shared-eigenvector", "right-stochastic", "commuting", "projection-pair")


class FamilyError(AssertionError):
    """A generated family does not satisfy its structural precondition."""


def _rank(M) -> int:
    rows = [list(r) for r in M]
    rank = 0
    cols = len(rows[0]) if rows else 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][c] != 0:
                f = rows[i][c] / rows[rank][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def _nonzero(rng, lo=-5, hi=5):
    while True:
        v = rng.randint(lo, hi)
        if v:
            return v


def generate_family(kind: str, rng: SplitMix64):
    """``(matrices, a)`` for a random member of a structured family."""
    if kind == "rank-one":
        n = rng.randint(2, 3)
        m = rng.randint(2, 3)
        while True:
            full = matrix([[rng.randint(-4, 4) for _ in range(n)] for _ in range(n)])
            if determinant(full) != 0:
                break
        mats = [full]
        for _ in range(m - 1):
            u = [_nonzero(rng) for _ in range(n)]
            v = [_nonzero(rng) for _ in range(n)]
            mats.append(matrix([[x * y for y in v] for x in u]))
        a = vector([rng.randint(-5, 5) for _ in range(n)])
        if any(_rank(M) != 1 for M in mats[1:]):
            raise FamilyError("rank-one factor has the wrong rank")
        return tuple(mats), a
    if kind == "shared-eigenvector":
        T1 = [[rng.randint(-4, 4), rng.randint(-4, 4)], [0, rng.randint(-4, 4)]]
        T2 = [[rng.randint(-4, 4), rng.randint(-4, 4)], [0, rng.randint(-4, 4)]]
        S = random_unimodular(rng, 2, steps=3, bound=2)
        mats = similarity_transform((matrix(T1), matrix(T2)), S)
        q = mat_vec(S, vector([1, 0]))
        for M in mats:
            Mq = mat_vec(M, q)
            if Mq[0] * q[1] - Mq[1] * q[0] != 0:
                raise FamilyError("matrices do not share the eigenvector S e1")
        return mats, vector([rng.randint(-9, 9), rng.randint(-9, 9)])
    if kind == "right-stochastic":
        mats = []
        for _ in range(2):
            rows = []
            for _ in range(2):
                p = Fraction(rng.randint(0, 8), 8)
                rows.append([p, 1 - p])
            mats.append(matrix(rows))
        for M in mats:
            if any(sum(r) != 1 or min(r) < 0 for r in M):
                raise FamilyError("matrix is not right stochastic")
        return tuple(mats), vector([rng.randint(-9, 9), rng.randint(-9, 9)])
    if kind == "commuting":
        n = rng.randint(2, 3)
        A = matrix([[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)])
        alpha, beta = rng.randint(-2, 2), rng.randint(-2, 2)
        B = tuple(tuple(alpha * A[i][j] + beta * (i == j) for j in range(n)) for i in range(n))
        B = matrix(mat_mul(B, A)) if rng.randint(0, 1) else matrix(B)
        if mat_mul(A, B) != mat_mul(B, A):
            raise FamilyError("matrices do not commute")
        return (A, B), vector([rng.randint(-9, 9) for _ in range(n)])
    if kind == "projection-pair":
        mats = []
        for _ in range(2):
            while True:
                u = [rng.randint(-4, 4) for _ in range(2)]
                v = [rng.randint(-4, 4) for _ in range(2)]
                s = u[0] * v[0] + u[1] * v[1]
                if s:
                    break
            mats.append(matrix([[Fraction(x * y, s) for y in v] for x in u]))
        for P in mats:
            if mat_mul(P, P) != P:
                raise FamilyError("matrix is not idempotent")
        return tuple(mats), vector([rng.randint(-9, 9), rng.randint(-9, 9)])
    raise ValueError(f"unknown family {kind!r}; choose from {FAMILIES}")


def family_bound(kind: str, k: int, m: int, n0: int) -> int:
    if kind == "rank-one":
        return n0 + 2 * k * (m - 1)
    if kind in ("shared-eigenvector", "right-stochastic", "projection-pair"):
        return max(2 * k, 1)
    if kind == "commuting":
        return k + 1
    raise ValueError(f"unknown family {kind!r}")


def structured_family_bounds(kind: str, K: int, samples: int = 10, seed: int = 0):
    """Generate ``samples`` members of a family and check its N_k bound for
    k <= K.  Returns a list of ``(matrices, a, trace, violations)``."""
    rng = SplitMix64(seed)
    out = []
    for _ in range(samples):
        mats, a = generate_family(kind, rng)
        trace = trace_nk(make_instance(mats, a, K))
        bad = [
            Violation(k, "N_k", N, family_bound(kind, k, len(mats), trace[0]))
            for k, N in trace.pairs()
            if N > family_bound(kind, k, len(mats), trace[0])
        ]
        out.append((mats, a, trace, bad))
    return out
