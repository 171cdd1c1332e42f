"""Seeded random instances.

Float mode draws matrix entries uniformly from [-1, 1] and the initial
vector from [0, 1].  Integer mode (for the exact backend) draws matrix
entries from {-9..9} and the initial vector from {0..9}.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import EXACT, FLOAT, InstanceSpec, make_instance
from .rng import SplitMix64

INTEGER = "integer"


@dataclass(frozen=True)
class GenSpec:
    n: int
    m: int
    K: int
    seed: int = 0
    mode: str = FLOAT
    matrix_range: tuple = None
    vector_range: tuple = None
    objective: str = "l2sq"

    def __post_init__(self):
        if self.n < 1 or self.m < 1 or self.K < 0:
            raise ValueError("need n >= 1, m >= 1 and K >= 0")
        if self.mode not in (FLOAT, INTEGER):
            raise ValueError(f"mode must be {FLOAT!r} or {INTEGER!r}")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def ranges(self):
        if self.mode == FLOAT:
            return self.matrix_range or (-1.0, 1.0), self.vector_range or (0.0, 1.0)
        return self.matrix_range or (-9, 9), self.vector_range or (0, 9)


def gen_random(spec: GenSpec) -> InstanceSpec:
    rng = SplitMix64(spec.seed)
    (mlo, mhi), (vlo, vhi) = spec.ranges()
    if spec.mode == FLOAT:
        draw_m = lambda: rng.uniform(mlo, mhi)
        draw_v = lambda: rng.uniform(vlo, vhi)
        arithmetic = FLOAT
    else:
        draw_m = lambda: rng.randint(int(mlo), int(mhi))
        draw_v = lambda: rng.randint(int(vlo), int(vhi))
        arithmetic = EXACT
    mats = [[[draw_m() for _ in range(spec.n)] for _ in range(spec.n)] for _ in range(spec.m)]
    a = [draw_v() for _ in range(spec.n)]
    return make_instance(mats, a, spec.K, spec.objective, arithmetic)
