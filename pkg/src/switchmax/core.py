"""Scalars, matrices, vectors and the problem instance model.

Vectors are tuples and matrices are tuples of row tuples.  Entries are either
all :class:`fractions.Fraction` (exact arithmetic) or all ``float``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Optional, Sequence, Tuple, Union

Scalar = Union[Fraction, float]
Vector = Tuple[Scalar, ...]
Matrix = Tuple[Vector, ...]

EXACT = "exact"
FLOAT = "float"
ARITHMETIC_MODES = (EXACT, FLOAT)

OBJECTIVE_KINDS = ("linear", "l1", "l2sq", "linf", "external")
_DEFAULT_DEGREE = {"linear": Fraction(1), "l1": Fraction(1), "linf": Fraction(1), "l2sq": Fraction(2)}


class InstanceFormatError(ValueError):
    """Raised when an instance document violates the schema."""

    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)


def to_scalar(value, arithmetic: str) -> Scalar:
    if arithmetic == EXACT:
        if isinstance(value, float):
            raise TypeError("float value in exact arithmetic")
        return Fraction(value)
    return float(value)


def vector(values, arithmetic: str = EXACT) -> Vector:
    return tuple(to_scalar(v, arithmetic) for v in values)


def matrix(rows, arithmetic: str = EXACT) -> Matrix:
    out = tuple(vector(r, arithmetic) for r in rows)
    n = len(out)
    if n == 0 or any(len(r) != n for r in out):
        raise ValueError("matrix must be square and non-empty")
    return out


def identity(n: int, arithmetic: str = EXACT) -> Matrix:
    one, zero = to_scalar(1, arithmetic), to_scalar(0, arithmetic)
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


def domain_of(value) -> str:
    return FLOAT if isinstance(value, float) else EXACT


def mat_vec(T: Matrix, x: Vector) -> Vector:
    """Return ``T @ x``."""
    if len(T[0]) != len(x):
        raise ValueError(f"dimension mismatch: {len(T)}x{len(T[0])} matrix, vector of length {len(x)}")
    if x and T and domain_of(T[0][0]) != domain_of(x[0]):
        raise TypeError("matrix and vector use different scalar domains")
    return tuple(sum(t * v for t, v in zip(row, x)) for row in T)


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    cols = list(zip(*B))
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in A)


def transpose(A: Matrix) -> Matrix:
    return tuple(zip(*A))


def dot(u: Vector, v: Vector):
    return sum(a * b for a, b in zip(u, v))


def mat_inverse(A: Matrix) -> Matrix:
    """Gauss-Jordan inverse; exact for Fraction entries."""
    n = len(A)
    aug = [list(row) + [Fraction(int(i == j)) if isinstance(row[0], Fraction) else float(i == j)
                        for j in range(n)] for i, row in enumerate(A)]
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(aug[r][col]))
        if aug[piv][col] == 0:
            raise ZeroDivisionError("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [v / p for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


def determinant(A: Matrix):
    n = len(A)
    rows = [list(r) for r in A]
    det = Fraction(1) if isinstance(A[0][0], Fraction) else 1.0
    for col in range(n):
        piv = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if piv is None:
            return det * 0
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            det = -det
        p = rows[col][col]
        det *= p
        for r in range(col + 1, n):
            f = rows[r][col] / p
            if f:
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[col])]
    return det


@dataclass(frozen=True)
class ObjectiveDescriptor:
    """A convex objective to maximize.

    ``degree`` is the positive homogeneity degree.  It defaults to 1 for
    ``linear``/``l1``/``linf`` and 2 for ``l2sq``; external oracles have no
    degree unless one is declared.
    """

    kind: str
    c: Optional[Vector] = None
    name: Optional[str] = None
    degree: Optional[Fraction] = None

    def __post_init__(self):
        if self.kind not in OBJECTIVE_KINDS:
            raise ValueError(f"unknown objective kind {self.kind!r}")
        if self.kind == "linear" and self.c is None:
            raise ValueError("linear objective needs a coefficient vector c")
        if self.kind == "external" and not self.name:
            raise ValueError("external objective needs an oracle name")
        if self.degree is None and self.kind in _DEFAULT_DEGREE:
            object.__setattr__(self, "degree", _DEFAULT_DEGREE[self.kind])
        if self.degree is not None and self.degree <= 0:
            raise ValueError("homogeneity degree must be positive")

    @property
    def homogeneous(self) -> bool:
        return self.degree is not None


@dataclass(frozen=True)
class InstanceSpec:
    """One instance: maximize f(T_{K-1} ... T_0 a) over T_t in ``matrices``."""

    matrices: Tuple[Matrix, ...]
    a: Vector
    K: int
    objective: ObjectiveDescriptor = field(default_factory=lambda: ObjectiveDescriptor("l2sq"))
    arithmetic: str = EXACT

    def __post_init__(self):
        if self.arithmetic not in ARITHMETIC_MODES:
            raise ValueError(f"arithmetic must be one of {ARITHMETIC_MODES}")
        if not self.matrices:
            raise ValueError("at least one matrix is required")
        if not isinstance(self.K, int) or self.K < 0:
            raise ValueError("K must be a non-negative integer")
        n = len(self.a)
        if n == 0:
            raise ValueError("dimension must be positive")
        want = Fraction if self.arithmetic == EXACT else float
        for T in self.matrices:
            if len(T) != n or any(len(row) != n for row in T):
                raise ValueError("all matrices must be n x n with n = len(a)")
            if not all(isinstance(v, want) for row in T for v in row):
                raise TypeError(f"matrix entries must be {want.__name__} in {self.arithmetic} mode")
        if not all(isinstance(v, want) for v in self.a):
            raise TypeError(f"initial vector entries must be {want.__name__} in {self.arithmetic} mode")
        if self.objective.c is not None:
            if len(self.objective.c) != n:
                raise ValueError("objective vector has the wrong dimension")

    @property
    def n(self) -> int:
        return len(self.a)

    @property
    def m(self) -> int:
        return len(self.matrices)

    def with_horizon(self, K: int) -> "InstanceSpec":
        return InstanceSpec(self.matrices, self.a, K, self.objective, self.arithmetic)

    def with_objective(self, objective: ObjectiveDescriptor) -> "InstanceSpec":
        return InstanceSpec(self.matrices, self.a, self.K, objective, self.arithmetic)


def make_instance(matrices, a, K, objective="l2sq", arithmetic=EXACT, c=None) -> InstanceSpec:
    """Convenience constructor from nested lists of numbers."""
    mats = tuple(matrix(T, arithmetic) for T in matrices)
    if isinstance(objective, str):
        objective = ObjectiveDescriptor(objective, c=vector(c, arithmetic) if c is not None else None)
    return InstanceSpec(mats, vector(a, arithmetic), K, objective, arithmetic)


def apply_sequence(instance: InstanceSpec, seq: Sequence[int]) -> Vector:
    """Apply ``seq`` in time order (``seq[0]`` acts first) to the initial vector."""
    x = instance.a
    for t, idx in enumerate(seq):
        if not 0 <= idx < instance.m:
            raise IndexError(f"matrix index {idx} at position {t} is out of range [0, {instance.m})")
        x = mat_vec(instance.matrices[idx], x)
    return x


def integer_scaling(instance: InstanceSpec):
    """Return ``(A_int, a_int, D, d)`` with ``A_i = A_int_i / D`` and ``a = a_int / d``.

    Exact instances only.  Working on the integer system keeps the inner loops
    on Python ints.
    """
    D = 1
    for T in instance.matrices:
        for row in T:
            for v in row:
                D = lcm(D, v.denominator)
    d = 1
    for v in instance.a:
        d = lcm(d, v.denominator)
    A_int = tuple(tuple(tuple(int(v * D) for v in row) for row in T) for T in instance.matrices)
    a_int = tuple(int(v * d) for v in instance.a)
    return A_int, a_int, D, d


# --- instance file format -------------------------------------------------


def _format_scalar(v):
    if isinstance(v, Fraction):
        if v.denominator == 1:
            return v.numerator
        return f"{v.numerator}/{v.denominator}"
    return float(v)


def _parse_scalar(raw, arithmetic, where):
    if isinstance(raw, bool):
        raise InstanceFormatError("booleans are not numbers", field=where)
    if isinstance(raw, _FloatLiteral):
        if arithmetic == EXACT:
            raise InstanceFormatError(
                f"decimal literal {raw} in an exact instance (mixed arithmetic domains); use \"p/q\"",
                field=where)
        return float(raw)
    if isinstance(raw, int):
        return Fraction(raw) if arithmetic == EXACT else float(raw)
    if isinstance(raw, str):
        if arithmetic == FLOAT:
            raise InstanceFormatError(
                f"rational string {raw!r} in a float instance (mixed arithmetic domains)", field=where)
        try:
            return Fraction(raw)
        except (ValueError, ZeroDivisionError):
            raise InstanceFormatError(f"bad rational {raw!r}", field=where) from None
    raise InstanceFormatError(f"expected a number, got {type(raw).__name__}", field=where)


class _FloatLiteral(str):
    """Keeps JSON decimal literals distinguishable from quoted strings."""

    def __float__(self):
        return float(str(self))


def _line_of(text, needle):
    idx = text.find(needle)
    return text.count("\n", 0, idx) + 1 if idx >= 0 else None


def parse_instance(text: str) -> InstanceSpec:
    """Parse a JSON instance document."""
    try:
        doc = json.loads(text, parse_float=_FloatLiteral)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(exc.msg, line=exc.lineno) from None
    if not isinstance(doc, dict):
        raise InstanceFormatError("top-level value must be an object", line=1)

    def need(key, kind):
        if key not in doc:
            raise InstanceFormatError("missing required field", field=key)
        val = doc[key]
        if not isinstance(val, kind) or isinstance(val, bool):
            raise InstanceFormatError(f"expected {kind.__name__}", field=key, line=_line_of(text, f'"{key}"'))
        return val

    n, m, K = need("n", int), need("m", int), need("K", int)
    arithmetic = need("arithmetic", str)
    if arithmetic not in ARITHMETIC_MODES:
        raise InstanceFormatError(f"must be one of {ARITHMETIC_MODES}", field="arithmetic",
                                  line=_line_of(text, '"arithmetic"'))
    if n < 1:
        raise InstanceFormatError("must be positive", field="n", line=_line_of(text, '"n"'))
    if m < 1:
        raise InstanceFormatError("must be positive", field="m", line=_line_of(text, '"m"'))
    if K < 0:
        raise InstanceFormatError("must be non-negative", field="K", line=_line_of(text, '"K"'))

    raw_mats = need("matrices", list)
    if len(raw_mats) != m:
        raise InstanceFormatError(f"expected {m} matrices, found {len(raw_mats)}", field="matrices",
                                  line=_line_of(text, '"matrices"'))
    mats = []
    for i, T in enumerate(raw_mats):
        if not isinstance(T, list) or len(T) != n:
            raise InstanceFormatError(f"expected {n} rows", field=f"matrices[{i}]")
        rows = []
        for r, row in enumerate(T):
            if not isinstance(row, list) or len(row) != n:
                raise InstanceFormatError(f"expected {n} entries", field=f"matrices[{i}][{r}]")
            rows.append(tuple(_parse_scalar(v, arithmetic, f"matrices[{i}][{r}][{c}]") for c, v in enumerate(row)))
        mats.append(tuple(rows))

    raw_a = need("a", list)
    if len(raw_a) != n:
        raise InstanceFormatError(f"expected {n} entries", field="a", line=_line_of(text, '"a"'))
    a = tuple(_parse_scalar(v, arithmetic, f"a[{i}]") for i, v in enumerate(raw_a))

    obj = doc.get("objective", {"kind": "l2sq"})
    if not isinstance(obj, dict) or "kind" not in obj:
        raise InstanceFormatError("objective must be an object with a 'kind'", field="objective")
    kind = obj["kind"]
    if kind not in ("linear", "l1", "l2sq", "linf"):
        raise InstanceFormatError(f"unsupported objective kind {kind!r}", field="objective.kind",
                                  line=_line_of(text, '"kind"'))
    c = None
    if kind == "linear":
        raw_c = obj.get("c")
        if not isinstance(raw_c, list) or len(raw_c) != n:
            raise InstanceFormatError(f"linear objective needs {n} coefficients", field="objective.c")
        c = tuple(_parse_scalar(v, arithmetic, f"objective.c[{i}]") for i, v in enumerate(raw_c))
    elif "c" in obj:
        raise InstanceFormatError(f"'c' is only allowed for linear objectives", field="objective.c")
    try:
        return InstanceSpec(tuple(mats), a, K, ObjectiveDescriptor(kind, c=c), arithmetic)
    except (ValueError, TypeError) as exc:
        raise InstanceFormatError(str(exc)) from None


def emit_instance(spec: InstanceSpec) -> str:
    """Serialize deterministically; ``parse_instance`` inverts this."""
    if spec.objective.kind == "external":
        raise ValueError("external objectives cannot be serialized")
    obj = {"kind": spec.objective.kind}
    if spec.objective.c is not None:
        obj["c"] = [_format_scalar(v) for v in spec.objective.c]
    doc = {
        "n": spec.n,
        "m": spec.m,
        "K": spec.K,
        "arithmetic": spec.arithmetic,
        "matrices": [[[_format_scalar(v) for v in row] for row in T] for T in spec.matrices],
        "a": [_format_scalar(v) for v in spec.a],
        "objective": obj,
    }
    # one matrix row per line keeps diffs readable
    lines = ["{"]
    for key in ("n", "m", "K", "arithmetic"):
        lines.append(f'  "{key}": {json.dumps(doc[key])},')
    lines.append('  "matrices": [')
    for i, T in enumerate(doc["matrices"]):
        rows = ",\n".join(f"      {json.dumps(row)}" for row in T)
        lines.append("    [\n" + rows + "\n    ]" + ("," if i < len(doc["matrices"]) - 1 else ""))
    lines.append("  ],")
    lines.append(f'  "a": {json.dumps(doc["a"])},')
    lines.append(f'  "objective": {json.dumps(obj)}')
    lines.append("}")
    return "\n".join(lines) + "\n"


def load_instance(path) -> InstanceSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


def save_instance(spec: InstanceSpec, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(emit_instance(spec))
