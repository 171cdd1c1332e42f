"""Export an instance as a bilinear mixed-integer program in AMPL syntax.

The model has continuous states ``x[i,k]`` for k = 0..K, binaries
``z[k,l]`` selecting the matrix used in period k, state equations
``x[i,k] = sum_{l,j} A[l,i,j] x[j,k-1] z[k,l]``, one assignment row per
period and the initial condition ``x[.,0] = a``.

Matrix and vector data are written as integer numerators over a common
denominator (``A_den``, ``a_den``) so exact instances stay exact; float
instances use denominator 1 and shortest round-trip decimals.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Dict, Sequence

from .core import EXACT, InstanceSpec, apply_sequence

SUPPORTED = ("l2sq", "linear")

_MODEL_HEAD = """\
# Optimal switching sequence: choose one of m matrices in each of K periods.
param n integer > 0;
param m integer > 0;
param K integer >= 0;
param A_den > 0;
param a_den > 0;
param A_num {1..m, 1..n, 1..n};
param a_num {1..n};
"""

_MODEL_BODY = """\
var x {1..n, 0..K};
var z {1..K, 1..m} binary;

@OBJECTIVE@
subject to state {i in 1..n, k in 1..K}:
    x[i,k] = sum {l in 1..m, j in 1..n} (A_num[l,i,j] / A_den) * x[j,k-1] * z[k,l];

subject to assign {k in 1..K}:
    sum {l in 1..m} z[k,l] = 1;

subject to init {i in 1..n}:
    x[i,0] = a_num[i] / a_den;
"""


@dataclass(frozen=True)
class MinlpExport:
    model: str
    data: str
    state_constraints: int
    assignment_constraints: int
    binaries: int


def _common(values, exact):
    if not exact:
        return 1, [repr(float(v)) for v in values]
    den = 1
    for v in values:
        den = lcm(den, Fraction(v).denominator)
    return den, [str(int(Fraction(v) * den)) for v in values]


def export_minlp(instance: InstanceSpec) -> MinlpExport:
    obj = instance.objective
    if obj.kind not in SUPPORTED:
        raise ValueError(f"MINLP export supports objectives {SUPPORTED}, not {obj.kind!r}")
    exact = instance.arithmetic == EXACT
    n, m, K = instance.n, instance.m, instance.K

    model = _MODEL_HEAD
    if obj.kind == "linear":
        model += "param c_den > 0;\nparam c_num {1..n};\n"
        objective = "maximize value: sum {i in 1..n} (c_num[i] / c_den) * x[i,K];\n"
    else:
        objective = "maximize value: sum {i in 1..n} x[i,K]^2;\n"
    model += "\n" + _MODEL_BODY.replace("@OBJECTIVE@", objective)

    A_vals = [v for T in instance.matrices for row in T for v in row]
    A_den, A_txt = _common(A_vals, exact)
    a_den, a_txt = _common(instance.a, exact)
    lines = [f"param n := {n};", f"param m := {m};", f"param K := {K};",
             f"param A_den := {A_den};", f"param a_den := {a_den};", "param A_num :="]
    it = iter(A_txt)
    for l in range(1, m + 1):
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                lines.append(f"  {l} {i} {j}  {next(it)}")
    lines.append(";")
    lines.append("param a_num :=")
    lines += [f"  {i}  {v}" for i, v in enumerate(a_txt, 1)]
    lines.append(";")
    if obj.kind == "linear":
        c_den, c_txt = _common(obj.c, exact)
        lines.append(f"param c_den := {c_den};")
        lines.append("param c_num :=")
        lines += [f"  {i}  {v}" for i, v in enumerate(c_txt, 1)]
        lines.append(";")
    data = "\n".join(lines) + "\n"
    return MinlpExport(model, data, n * K, K, m * K)


# --- reading the data back --------------------------------------------------------


def _number(tok: str, exact: bool):
    if exact:
        return Fraction(tok)
    return float(tok)


def parse_dat(text: str, exact: bool = True) -> Dict:
    """Parse a data file written by :func:`export_minlp`."""
    out: Dict = {}
    for stmt in text.split(";"):
        stmt = stmt.strip()
        if not stmt:
            continue
        m = re.match(r"param\s+(\w+)\s*:=\s*(.*)$", stmt, re.S)
        if not m:
            raise ValueError(f"unrecognized statement {stmt[:40]!r}")
        name, body = m.group(1), m.group(2).split()
        if name in ("n", "m", "K"):
            out[name] = int(body[0])
        elif name in ("A_den", "a_den", "c_den"):
            out[name] = _number(body[0], exact)
        elif name == "A_num":
            out[name] = {tuple(int(t) for t in body[p:p + 3]): _number(body[p + 3], exact)
                         for p in range(0, len(body), 4)}
        else:
            out[name] = {int(body[p]): _number(body[p + 1], exact) for p in range(0, len(body), 2)}
    return out


def trajectory(instance: InstanceSpec, sequence: Sequence[int]):
    """States ``x(0..K)`` and the 0/1 matrix ``z[k][l]`` (k = 1..K) of a sequence."""
    xs = [apply_sequence(instance, sequence[:k]) for k in range(len(sequence) + 1)]
    z = [[int(sequence[k - 1] == l) for l in range(instance.m)] for k in range(1, len(sequence) + 1)]
    return xs, z


def check_solution(dat: Dict, xs, z, objective_kind: str, relative: bool = False):
    """Evaluate every constraint of the exported model at ``(x, z)``.

    Returns ``(worst_violation, objective_value)``.  With exact data the
    violation is an exact rational; ``relative`` scales each state-equation
    residual by ``max(1, |x[i,k]|)`` for float data."""
    n, m, K = dat["n"], dat["m"], dat["K"]
    A = lambda l, i, j: dat["A_num"][(l, i, j)] / dat["A_den"]
    worst = 0
    for i in range(1, n + 1):
        worst = max(worst, abs(xs[0][i - 1] - dat["a_num"][i] / dat["a_den"]))
    for k in range(1, K + 1):
        row = z[k - 1]
        if any(v not in (0, 1) for v in row):
            worst = max(worst, 1)
        worst = max(worst, abs(sum(row) - 1))
        for i in range(1, n + 1):
            rhs = sum(A(l, i, j) * xs[k - 1][j - 1] * row[l - 1] for l in range(1, m + 1) for j in range(1, n + 1))
            lhs = xs[k][i - 1]
            err = abs(lhs - rhs)
            if relative:
                err = err / max(1.0, abs(lhs))
            worst = max(worst, err)
    if objective_kind == "linear":
        value = sum(dat["c_num"][i] / dat["c_den"] * xs[K][i - 1] for i in range(1, n + 1))
    else:
        value = sum(xs[K][i - 1] ** 2 for i in range(1, n + 1))
    return worst, value
