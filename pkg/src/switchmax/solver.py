"""Forward dynamic program over extreme-point layers, plus the enumeration oracle.

Layer ``k`` holds the vertices of the convex hull of every state reachable in
exactly ``k`` steps.  Layer ``k+1`` is obtained by applying each matrix to
each vertex of layer ``k`` and keeping the extreme points of the result.
A convex objective attains its maximum over the reachable set at one of those
vertices, so the last layer is all that has to be searched.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from .core import EXACT, FLOAT, InstanceSpec, ObjectiveDescriptor, Vector, apply_sequence, integer_scaling
from .hull import DEFAULT_TOLERANCE, HullStats, Tolerance, extreme_indices_lp, graham_order

ENGINES = ("auto", "lp", "graham")


class SolverError(RuntimeError):
    """Base class for solver diagnostics."""


class SolverTimeout(SolverError):
    def __init__(self, limit, layer):
        self.limit = limit
        self.layer = layer
        super().__init__(f"time limit of {limit} s exceeded while building layer {layer}")


class NumericError(SolverError):
    """Float data left the representable range."""


class EnumerationCapError(SolverError):
    pass


# --- objectives -------------------------------------------------------------

_ORACLES: Dict[str, Callable] = {}


def register_oracle(name: str, fn: Callable) -> None:
    """Make ``fn`` available to objectives of kind ``external`` named ``name``.

    The caller is responsible for ``fn`` being convex."""
    _ORACLES[name] = fn


def unregister_oracle(name: str) -> None:
    _ORACLES.pop(name, None)


def evaluate_objective(obj: ObjectiveDescriptor, x: Vector):
    kind = obj.kind
    if kind == "linear":
        if len(obj.c) != len(x):
            raise ValueError("objective vector and state differ in dimension")
        return sum((c * v for c, v in zip(obj.c, x)), 0 * x[0] if x else 0)
    if kind == "l1":
        return sum((abs(v) for v in x), 0 * x[0] if x else 0)
    if kind == "linf":
        return max((abs(v) for v in x), default=0)
    if kind == "l2sq":
        return sum((v * v for v in x), 0 * x[0] if x else 0)
    if kind == "external":
        try:
            fn = _ORACLES[obj.name]
        except KeyError:
            raise KeyError(f"external oracle {obj.name!r} is not registered") from None
        return fn(x)
    raise ValueError(f"unknown objective kind {kind!r}")


# --- results ----------------------------------------------------------------


@dataclass(frozen=True)
class SolverOptions:
    """``engine``: ``auto`` uses Graham's scan for n = 2 and LP separation
    otherwise.  ``rescale``: ``None`` enables per-layer normalization for
    float instances with a homogeneous objective.  ``time_limit`` is checked
    between layers."""

    engine: str = "auto"
    rescale: Optional[bool] = None
    tolerance: Tolerance = DEFAULT_TOLERANCE
    time_limit: Optional[float] = None
    sense: str = "maximize"
    lp_method: str = "clarkson"

    def __post_init__(self):
        if self.sense != "maximize":
            raise ValueError("only maximization is supported: the vertex search is not valid for minimizing a convex f")
        if self.engine not in ENGINES:
            raise ValueError(f"engine must be one of {ENGINES}")


@dataclass(frozen=True)
class LayerPoint:
    x: Vector
    parent: Optional[int] = None
    matrix_index: Optional[int] = None


@dataclass(frozen=True)
class Layer:
    k: int
    points: Tuple[LayerPoint, ...]
    scale: object = 1
    log_scale: float = 0.0

    def __len__(self):
        return len(self.points)

    @property
    def vertices(self):
        return [p.x for p in self.points]


@dataclass(frozen=True)
class LayerStats:
    k: int
    candidates: int
    vertices: int
    seconds: float
    lp_calls: int = 0


@dataclass(frozen=True)
class SolveResult:
    value: object
    xK: Vector
    sequence: Tuple[int, ...]
    nk_trace: Tuple[int, ...]
    stats: Tuple[LayerStats, ...] = ()
    engine: str = ""

    @property
    def lp_calls(self) -> int:
        return sum(s.lp_calls for s in self.stats)


# --- layer machinery ----------------------------------------------------------


def _resolve(instance: InstanceSpec, options: SolverOptions):
    engine = options.engine
    if engine == "auto":
        engine = "graham" if instance.n == 2 else "lp"
    if engine == "graham" and instance.n != 2:
        raise ValueError("the Graham engine needs n = 2")
    rescale = options.rescale
    if rescale is None:
        rescale = instance.arithmetic == FLOAT and instance.objective.homogeneous
    if rescale and not instance.objective.homogeneous:
        raise ValueError("rescaling needs an objective with a declared homogeneity degree")
    return engine, rescale


class _Walker:
    """Builds successive layers on an internal representation.

    Exact mode works on integer vectors ``y`` with ``x = y / (D**k * d)``.
    Float mode works on a numpy array, optionally renormalized each layer.
    """

    def __init__(self, instance: InstanceSpec, options: SolverOptions):
        self.instance = instance
        self.options = options
        self.engine, self.rescale = _resolve(instance, options)
        self.exact = instance.arithmetic == EXACT
        self.tol = options.tolerance
        if self.exact:
            self.A, a, self.D, self.d = integer_scaling(instance)
            self.Y = [a]
            self.denom = Fraction(self.d)
        else:
            self.A = [np.array(T, dtype=float) for T in instance.matrices]
            self.Y = np.array([instance.a], dtype=float)
            self.log_scale = 0.0
            self._normalize()
        self.k = 0
        self.parents = [None]
        self.mats = [None]
        self.rank = [0]

    def _normalize(self):
        if not self.rescale:
            return
        M = float(np.abs(self.Y).max())
        if M > 0 and math.isfinite(M):
            self.Y = self.Y / M
            self.log_scale += math.log(M)

    def layer(self) -> Layer:
        if self.exact:
            if self.rescale:
                M = max((abs(v) for y in self.Y for v in y), default=0) or 1
                xs = [tuple(Fraction(v, M) for v in y) for y in self.Y]
                scale = M / self.denom
            else:
                xs = [tuple(Fraction(v) / self.denom for v in y) for y in self.Y]
                scale = Fraction(1)
            log_scale = math.log(scale.numerator) - math.log(scale.denominator)
        else:
            xs = [tuple(float(v) for v in row) for row in self.Y]
            log_scale = self.log_scale
            try:
                scale = math.exp(log_scale)
            except OverflowError:
                scale = math.inf
        pts = tuple(LayerPoint(x, p, i) for x, p, i in zip(xs, self.parents, self.mats))
        return Layer(self.k, pts, scale, log_scale)

    def step(self) -> LayerStats:
        t0 = time.perf_counter()
        m = len(self.A)
        if self.exact:
            # provenance key (rank of parent sequence, matrix index); first wins
            order = sorted(((self.rank[p], i, p) for i in range(m) for p in range(len(self.Y))))
            cand = {}
            for _, i, p in order:
                T = self.A[i]
                y = self.Y[p]
                z = tuple(sum(a * b for a, b in zip(row, y)) for row in T)
                if z not in cand:
                    cand[z] = (p, i)
            pts = list(cand)
        else:
            Z = np.concatenate([self.Y @ T.T for T in self.A])
            if not np.all(np.isfinite(Z)):
                raise NumericError(f"float overflow at layer {self.k + 1}; enable rescaling")
            src = [(p, i) for i in range(m) for p in range(len(self.Y))]
            keys = sorted(range(len(src)), key=lambda r: (self.rank[src[r][0]], src[r][1]))
            cand = {}
            for r in keys:
                z = tuple(Z[r].tolist())
                if z not in cand:
                    cand[z] = src[r]
            pts = list(cand)
        hstats = HullStats()
        if self.engine == "graham":
            eps = 0 if self.exact else self.tol.cross
            idx = graham_order(pts, eps)
        else:
            idx = extreme_indices_lp(pts, self.tol, self.options.lp_method, hstats)
        keep = sorted((pts[j] for j in idx))
        provenance = [cand[z] for z in keep]
        # rank new points by their (lexicographically smallest known) sequence
        seq_key = sorted(range(len(keep)), key=lambda r: (self.rank[provenance[r][0]], provenance[r][1]))
        rank = [0] * len(keep)
        for pos, r in enumerate(seq_key):
            rank[r] = pos
        self.parents = [p for p, _ in provenance]
        self.mats = [i for _, i in provenance]
        self.rank = rank
        if self.exact:
            self.Y = keep
            self.denom *= self.D
        else:
            self.Y = np.array(keep, dtype=float)
            self._normalize()
        self.k += 1
        return LayerStats(self.k, len(pts), len(keep), time.perf_counter() - t0, hstats.lp_calls)


def iter_layers(instance: InstanceSpec, options: SolverOptions = SolverOptions(), K: Optional[int] = None):
    """Yield layers 0..K (default ``instance.K``)."""
    K = instance.K if K is None else K
    walker = _Walker(instance, options)
    yield walker.layer()
    for _ in range(K):
        walker.step()
        yield walker.layer()


def solve(instance: InstanceSpec, options: SolverOptions = SolverOptions()) -> SolveResult:
    """Maximize the instance objective over all ``m**K`` switching sequences."""
    start = time.perf_counter()
    walker = _Walker(instance, options)
    history = [(walker.parents, walker.mats)]
    trace = [len(walker.Y)]
    stats = []
    for k in range(instance.K):
        if options.time_limit is not None and time.perf_counter() - start > options.time_limit:
            raise SolverTimeout(options.time_limit, k + 1)
        stats.append(walker.step())
        history.append((walker.parents, walker.mats))
        trace.append(len(walker.Y))

    obj = instance.objective
    if walker.exact:
        # positive scaling keeps the argmax; evaluate on the integer points
        scores = [evaluate_objective(obj, tuple(Fraction(v) for v in y)) for y in walker.Y]
        pts = walker.Y
    else:
        pts = [tuple(row.tolist()) for row in walker.Y]
        scores = [evaluate_objective(obj, p) for p in pts]
    best = max(scores)
    winner = min((j for j, s in enumerate(scores) if s == best), key=lambda j: pts[j])

    seq = []
    j = winner
    for k in range(instance.K, 0, -1):
        parents, mats = history[k]
        seq.append(mats[j])
        j = parents[j]
    seq.reverse()
    xK = apply_sequence(instance, seq)
    value = evaluate_objective(obj, xK)
    if not walker.exact and not math.isfinite(value):
        value = _rescaled_value(scores[winner], obj, walker.log_scale)
    return SolveResult(value, xK, tuple(seq), tuple(trace), tuple(stats), walker.engine)


def _rescaled_value(scaled, obj, log_scale):
    if scaled == 0:
        return 0.0
    try:
        return scaled * math.exp(float(obj.degree) * log_scale)
    except OverflowError:
        return math.copysign(math.inf, scaled)


# --- enumeration oracle ---------------------------------------------------------

DEFAULT_ENUMERATION_CAP = 2 ** 24


def _enumerate(instance: InstanceSpec, K: int, cap: int):
    """Levels of distinct reachable states on the internal representation.

    Returns ``(levels, links, denoms)``: ``levels[k]`` is an array whose rows
    are distinct states in lexicographic order of their smallest reaching
    sequence, ``links[k]`` holds ``(parent row, matrix index)`` per row and
    ``x = levels[k][r] / denoms[k]``.
    """
    m = instance.m
    if m ** K > cap:
        raise EnumerationCapError(f"m**K = {m}**{K} exceeds the enumeration cap {cap}")
    if instance.arithmetic == EXACT:
        A_int, a, D, d = integer_scaling(instance)
        mats = [np.array(T, dtype=object) for T in A_int]
        X = np.array([a], dtype=object)
        denoms = [Fraction(d)]
        M = max((abs(v) for T in A_int for row in T for v in row), default=0)
        growth = instance.n * M
    else:
        mats = [np.array(T, dtype=float) for T in instance.matrices]
        X = np.array([instance.a], dtype=float)
        denoms = [1.0]
        D = 1
    levels, links = [X], [(None, None)]
    for _ in range(K):
        exact = X.dtype == object
        small = exact and int(np.abs(X).max(initial=0)) * growth < 2 ** 62
        work = X.astype(np.int64) if small else X
        # row p*m + i is parent p followed by matrix i: sequence order
        stacked = np.stack([work @ (T.astype(np.int64) if small else T).T for T in mats], axis=1)
        Y = stacked.reshape(-1, instance.n)
        if exact and not small:
            seen = {}
            for r, row in enumerate(map(tuple, Y)):
                seen.setdefault(row, r)
            first = np.array(sorted(seen.values()), dtype=np.int64)
        else:
            _, first = np.unique(Y, axis=0, return_index=True)
            first = np.sort(first)
        X = Y[first].astype(object) if small else Y[first]
        levels.append(X)
        links.append((first // m, first % m))
        denoms.append(denoms[-1] * D)
    return levels, links, denoms


def _states(level, denom, exact):
    if exact:
        rows = level.tolist()
        if denom == 1:
            return [tuple(map(Fraction, row)) for row in rows]
        return [tuple(Fraction(v) / denom for v in row) for row in rows]
    return [tuple(row) for row in level.tolist()]


def _int_scorer(obj: ObjectiveDescriptor):
    """A function on integer states ordering them like ``obj`` orders the
    positively scaled states, or None when no such shortcut exists."""
    kind = obj.kind
    if kind == "l2sq":
        return lambda y: sum(v * v for v in y)
    if kind == "l1":
        return lambda y: sum(abs(v) for v in y)
    if kind == "linf":
        return lambda y: max(abs(v) for v in y)
    if kind == "linear":
        L = 1
        for c in obj.c:
            L = lcm(L, Fraction(c).denominator)
        c_int = [int(Fraction(c) * L) for c in obj.c]
        return lambda y: sum(c * v for c, v in zip(c_int, y))
    return None


def reachable_sets(instance: InstanceSpec, K: Optional[int] = None, cap: int = DEFAULT_ENUMERATION_CAP):
    """Yield ``(k, X_k)`` for k = 0..K, each ``X_k`` a list of distinct states."""
    K = instance.K if K is None else K
    levels, _, denoms = _enumerate(instance, K, cap)
    exact = instance.arithmetic == EXACT
    for k, (level, denom) in enumerate(zip(levels, denoms)):
        yield k, _states(level, denom, exact)


def brute_force(instance: InstanceSpec, cap: int = DEFAULT_ENUMERATION_CAP):
    """Full enumeration: ``(value, sequence, X_K)`` with ``X_K`` deduplicated
    and sorted.  Ties go to the lexicographically smallest state, then the
    lexicographically smallest sequence."""
    K = instance.K
    levels, links, denoms = _enumerate(instance, K, cap)
    exact = instance.arithmetic == EXACT
    obj = instance.objective
    scorer = _int_scorer(obj) if exact else None
    if scorer is not None:
        rows = [tuple(row) for row in levels[K].tolist()]
        scores = [scorer(y) for y in rows]
    else:
        rows = _states(levels[K], denoms[K], exact)
        scores = [evaluate_objective(obj, x) for x in rows]
    top = max(scores)
    r = min((r for r, v in enumerate(scores) if v == top), key=rows.__getitem__)
    winner = _states(levels[K][r:r + 1], denoms[K], exact)[0]
    value = evaluate_objective(obj, winner)
    seq = []
    for k in range(K, 0, -1):
        parent, mat = links[k]
        seq.append(int(mat[r]))
        r = int(parent[r])
    seq.reverse()
    order = sorted(range(len(rows)), key=rows.__getitem__)
    X = _states(levels[K][order], denoms[K], exact)
    return value, tuple(seq), X
