"""Problem reductions: 3-SAT to a pair of stochastic matrices, k-mortality,
and a lower bound on the finite-horizon joint spectral radius."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .core import EXACT, FLOAT, InstanceSpec, ObjectiveDescriptor, make_instance, transpose, vector
from .solver import SolverOptions, solve


class CnfError(ValueError):
    pass


@dataclass(frozen=True)
class CnfFormula:
    """Clauses are triples of non-zero ints: ``v`` is y_v, ``-v`` its negation."""

    num_vars: int
    clauses: Tuple[Tuple[int, int, int], ...]

    def __post_init__(self):
        if self.num_vars < 1:
            raise CnfError("a formula needs at least one variable")
        clauses = tuple(tuple(c) for c in self.clauses)
        for idx, clause in enumerate(clauses):
            if len(clause) != 3:
                raise CnfError(f"clause {idx + 1} has {len(clause)} literals; exactly 3 are required")
            for lit in clause:
                if not isinstance(lit, int) or lit == 0 or abs(lit) > self.num_vars:
                    raise CnfError(f"clause {idx + 1}: bad literal {lit!r}")
        object.__setattr__(self, "clauses", clauses)

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def satisfied_count(self, assignment: Sequence[bool]) -> int:
        """``assignment[v - 1]`` is the value of y_v."""
        return sum(any((lit > 0) == assignment[abs(lit) - 1] for lit in c) for c in self.clauses)


def parse_dimacs(text: str) -> CnfFormula:
    num_vars = None
    num_clauses = None
    lits: List[int] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise CnfError(f"line {lineno}: malformed problem line")
            num_vars, num_clauses = int(parts[2]), int(parts[3])
            continue
        if num_vars is None:
            raise CnfError(f"line {lineno}: clause before the 'p cnf' line")
        try:
            lits.extend(int(tok) for tok in line.split())
        except ValueError:
            raise CnfError(f"line {lineno}: non-integer token") from None
    if num_vars is None:
        raise CnfError("missing 'p cnf' line")
    clauses = []
    cur: List[int] = []
    for lit in lits:
        if lit == 0:
            clauses.append(tuple(cur))
            cur = []
        else:
            cur.append(lit)
    if cur:
        clauses.append(tuple(cur))
    if num_clauses is not None and len(clauses) != num_clauses:
        raise CnfError(f"header announces {num_clauses} clauses, found {len(clauses)}")
    return CnfFormula(num_vars, tuple(clauses))


def emit_dimacs(f: CnfFormula) -> str:
    lines = [f"p cnf {f.num_vars} {f.num_clauses}"]
    lines += [" ".join(str(l) for l in c) + " 0" for c in f.clauses]
    return "\n".join(lines) + "\n"


def dpll(f: CnfFormula) -> Optional[List[bool]]:
    """A satisfying assignment, or None.  Unit propagation plus branching."""

    def simplify(clauses, lit):
        out = []
        for c in clauses:
            if lit in c:
                continue
            reduced = c - {-lit}
            if not reduced:
                return None
            out.append(reduced)
        return out

    def search(clauses, assigned):
        while True:
            unit = next((c for c in clauses if len(c) == 1), None)
            if unit is None:
                break
            lit = next(iter(unit))
            assigned[abs(lit)] = lit > 0
            clauses = simplify(clauses, lit)
            if clauses is None:
                return None
        if not clauses:
            return assigned
        lit = next(iter(clauses[0]))
        for choice in (lit, -lit):
            nxt = simplify(clauses, choice)
            if nxt is not None:
                res = search(nxt, {**assigned, abs(choice): choice > 0})
                if res is not None:
                    return res
        return None

    res = search([frozenset(c) for c in f.clauses], {})
    if res is None:
        return None
    return [res.get(v, False) for v in range(1, f.num_vars + 1)]


def all_sign_patterns() -> CnfFormula:
    """The 8 clauses over y1, y2, y3 with every sign pattern (unsatisfiable)."""
    clauses = []
    for mask in range(8):
        clauses.append(tuple((v if not mask >> (v - 1) & 1 else -v) for v in (1, 2, 3)))
    return CnfFormula(3, tuple(clauses))


@dataclass(frozen=True)
class ReductionArtifact:
    """``instance`` plus the decision threshold: the formula is satisfiable
    exactly when the optimum equals ``threshold``."""

    instance: InstanceSpec
    threshold: object
    formula: CnfFormula
    right_stochastic: bool = False

    def assignment(self, sequence: Sequence[int]) -> List[bool]:
        """Truth assignment encoded by a matrix sequence (index 0 means true)."""
        n = self.formula.num_vars
        if len(sequence) != n:
            raise ValueError(f"sequence must have length {n}")
        if self.right_stochastic:
            return [sequence[n - t] == 0 for t in range(1, n + 1)]
        return [sequence[t - 1] == 0 for t in range(1, n + 1)]

    def sequence(self, assignment: Sequence[bool]) -> Tuple[int, ...]:
        n = self.formula.num_vars
        seq = [0 if assignment[t - 1] else 1 for t in range(1, n + 1)]
        return tuple(reversed(seq)) if self.right_stochastic else tuple(seq)


def clause_gadget(clause: Sequence[int], n: int, positive: bool):
    """Adjacency matrix (entry [u][v] = 1 for an arc u -> v) of one clause
    block; node u_l is index l - 1.  ``positive`` selects the graph whose
    literal-dependent arcs come from y_l (else from its negation)."""
    size = 2 * n + 1
    M = [[0] * size for _ in range(size)]
    M[size - 1][size - 1] = 1
    for l in range(1, 2 * n + 1):
        lit = l if positive else -l
        if l <= n and lit in clause:
            src = n + l + 1
        else:
            src = l + 1
        M[src - 1][l - 1] = 1
    return M


def sat_to_instance(f: CnfFormula, right_stochastic: bool = False) -> ReductionArtifact:
    """Two block-diagonal 0/1 matrices (index 0 from y-literals, index 1 from
    negated literals), horizon n and a linear objective whose optimum counts
    the clauses satisfied by the best assignment."""
    n, m = f.num_vars, f.num_clauses
    if m == 0:
        raise CnfError("formula has no clauses")
    size = 2 * n + 1
    N = m * size
    mats = []
    for positive in (True, False):
        M = [[0] * N for _ in range(N)]
        for j, clause in enumerate(f.clauses):
            G = clause_gadget(clause, n, positive)
            off = j * size
            for r in range(size):
                for c in range(size):
                    M[off + r][off + c] = G[r][c]
        mats.append(M)
    first = [0] * N
    last = [0] * N
    for j in range(m):
        first[j * size] = 1
        last[j * size + size - 1] = 1
    if right_stochastic:
        mats = [transpose(M) for M in mats]
        a, c = last, first
    else:
        a, c = first, last
    inst = make_instance(mats, a, n, "linear", EXACT, c=c)
    return ReductionArtifact(inst, Fraction(m), f, right_stochastic)


# --- mortality and spectral radius bounds ----------------------------------------------


def check_k_mortal(matrices, k: int, options: SolverOptions = SolverOptions()) -> bool:
    """True iff some product of k matrices from the set is the zero matrix.

    For non-negative matrices this holds exactly when the maximum of
    ``-1.x(k)`` from ``x(0) = 1`` is 0."""
    mats = [list(map(list, M)) for M in matrices]
    if not mats:
        raise ValueError("empty matrix set")
    if any(v < 0 for M in mats for row in M for v in row):
        raise ValueError("mortality check needs non-negative matrices")
    floats = any(isinstance(v, float) for M in mats for row in M for v in row)
    arithmetic = FLOAT if floats else EXACT
    n = len(mats[0])
    inst = make_instance(mats, [1] * n, k, "linear", arithmetic, c=[-1] * n)
    return solve(inst, options).value == 0


NORMS = {"1": "l1", "2": "l2sq", "inf": "linf"}


def jsr_lower_bound(matrices, k: int, a, p="2", options: SolverOptions = SolverOptions(),
                    unit_tol: float = 1e-12) -> float:
    """``(max ||x(k)||_p)^(1/k)`` for a unit-norm ``a``.

    This never exceeds the largest ``||T_{k-1}...T_0||^(1/k)`` over products
    in the induced operator norm."""
    p = str(p)
    if p not in NORMS:
        raise ValueError("p must be 1, 2 or inf")
    if k < 1:
        raise ValueError("k must be positive")
    mats = [list(map(list, M)) for M in matrices]
    floats = any(isinstance(v, float) for v in a) or any(isinstance(v, float) for M in mats for r in M for v in r)
    arithmetic = FLOAT if floats else EXACT
    av = vector(a, arithmetic)
    if p == "1":
        norm = sum(abs(v) for v in av)
    elif p == "inf":
        norm = max(abs(v) for v in av)
    else:
        norm = sum(v * v for v in av)
    if arithmetic == EXACT:
        if norm != 1:
            raise ValueError(f"a must have unit {p}-norm")
    elif abs(float(norm) - 1.0) > unit_tol:
        raise ValueError(f"a must have unit {p}-norm (within {unit_tol})")
    inst = make_instance(mats, list(av), k, NORMS[p], arithmetic)
    value = float(solve(inst, options).value)
    if p == "2":
        return value ** (1.0 / (2 * k))
    return value ** (1.0 / k)
