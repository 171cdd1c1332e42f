"""Benchmark harness over a grid of seeded random float instances."""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import List, Optional

from .generate import GenSpec, gen_random
from .solver import SolverError, SolverOptions, SolverTimeout, solve

DEFAULT_TIME_LIMIT = 600.0


@dataclass(frozen=True)
class GridEntry:
    n: int
    m: int
    K: int
    reps: int = 1
    seed: int = 0


@dataclass
class BenchRecord:
    id: str
    n: int
    m: int
    K: int
    seed: int
    status: str
    seconds: float
    value: Optional[float] = None
    nk_max: Optional[int] = None
    nk_final: Optional[int] = None
    engine: str = ""
    backend: str = "float"
    message: str = ""


def parse_grid(spec: str) -> List[GridEntry]:
    """Grid from JSON (a list of objects with n, m, K and optional reps, seed)
    or from the short form ``"n,m,K[xreps][@seed];..."``."""
    spec = spec.strip()
    if not spec:
        return []
    if spec[0] in "[{":
        data = json.loads(spec)
        if isinstance(data, dict):
            data = data.get("grid", [])
        return [GridEntry(int(d["n"]), int(d["m"]), int(d["K"]), int(d.get("reps", 1)), int(d.get("seed", 0)))
                for d in data]
    out = []
    for part in filter(None, (p.strip() for p in spec.split(";"))):
        seed = 0
        if "@" in part:
            part, s = part.split("@", 1)
            seed = int(s)
        reps = 1
        if "x" in part:
            part, r = part.split("x", 1)
            reps = int(r)
        try:
            n, m, K = (int(v) for v in part.split(","))
        except ValueError:
            raise ValueError(f"bad grid entry {part!r}; expected n,m,K[xreps][@seed]") from None
        out.append(GridEntry(n, m, K, reps, seed))
    return out


def _run_one(args):
    entry, rep, time_limit = args
    seed = entry.seed + rep
    rid = f"n{entry.n}-m{entry.m}-K{entry.K}-s{seed}"
    inst = gen_random(GenSpec(entry.n, entry.m, entry.K, seed=seed))
    t0 = time.perf_counter()
    try:
        res = solve(inst, SolverOptions(time_limit=time_limit))
    except SolverTimeout as exc:
        return BenchRecord(rid, entry.n, entry.m, entry.K, seed, "timeout", time.perf_counter() - t0, message=str(exc))
    except (SolverError, RuntimeError) as exc:
        return BenchRecord(rid, entry.n, entry.m, entry.K, seed, "error", time.perf_counter() - t0, message=str(exc))
    dt = time.perf_counter() - t0
    status = "solved" if time_limit is None or dt <= time_limit else "timeout"
    return BenchRecord(rid, entry.n, entry.m, entry.K, seed, status, dt, float(res.value),
                       max(res.nk_trace), res.nk_trace[-1], res.engine)


def bench(grid: List[GridEntry], time_limit: Optional[float] = DEFAULT_TIME_LIMIT, workers: int = 1) -> List[BenchRecord]:
    """Solve every grid instance; timeouts and failures are recorded, not raised.

    The time limit is checked between layers, so a run may overshoot it by
    one layer; such runs are still reported as timeouts."""
    jobs = [(e, r, time_limit) for e in grid for r in range(e.reps)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_run_one, jobs))
    else:
        records = [_run_one(j) for j in jobs]
    return sorted(records, key=lambda r: (r.n, r.m, r.K, r.seed))


CSV_FIELDS = ("id", "n", "m", "K", "seed", "status", "seconds", "value", "nk_max", "nk_final", "engine", "backend")


def report_csv(records: List[BenchRecord]) -> str:
    lines = [",".join(CSV_FIELDS)]
    for r in records:
        d = asdict(r)
        lines.append(",".join("" if d[f] is None else (repr(d[f]) if isinstance(d[f], float) else str(d[f]))
                              for f in CSV_FIELDS))
    return "\n".join(lines) + "\n"


def report_json(records: List[BenchRecord]) -> str:
    return json.dumps([asdict(r) for r in records], indent=2) + "\n"


def summarize(records: List[BenchRecord]):
    """Mean solve time and status counts per (n, m, K)."""
    groups = {}
    for r in records:
        groups.setdefault((r.n, r.m, r.K), []).append(r)
    out = []
    for key in sorted(groups):
        rs = groups[key]
        solved = [r.seconds for r in rs if r.status == "solved"]
        out.append({
            "n": key[0], "m": key[1], "K": key[2], "instances": len(rs), "solved": len(solved),
            "mean_seconds": sum(solved) / len(solved) if solved else None,
        })
    return out
