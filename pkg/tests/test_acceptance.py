"""Acceptance suite: one test per criterion.

Each test prints a single PASS/FAIL line (visible with ``-s``); the pytest
terminal summary repeats them under "acceptance criteria"."""

import time
from fractions import Fraction

import pytest

from oracles import max_satisfiable, pairwise_extreme_points, random_cnf, random_point_set
from switchmax.analysis import (
    check_growth_bounds,
    check_offdiagonal_bound,
    check_similarity_invariance,
    random_unimodular,
    sample_region,
    structured_family_bounds,
)
from switchmax.core import EXACT, FLOAT, apply_sequence, make_instance
from switchmax.generate import INTEGER, GenSpec, gen_random
from switchmax.hull import extreme_points
from switchmax.minlp import check_solution, export_minlp, parse_dat, trajectory
from switchmax.reductions import all_sign_patterns, dpll, sat_to_instance
from switchmax.rng import SplitMix64
from switchmax.solver import SolverOptions, brute_force, evaluate_objective, reachable_sets, solve


def report(num, ok, detail):
    print(f"\ncriterion {num}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, detail


def test_criterion_01_oracle_equivalence():
    rng = SplitMix64(101)
    start = time.perf_counter()
    mismatches = []
    count = 0
    for n in (2, 3, 4):
        for m in (2, 3):
            for _ in range(34):
                K = rng.randint(4, 10)
                inst = gen_random(GenSpec(n, m, K, seed=rng.next_u64(), mode=INTEGER))
                res = solve(inst)
                bf_value, _, _ = brute_force(inst)
                replay = evaluate_objective(inst.objective, apply_sequence(inst, res.sequence))
                if res.value != bf_value or replay != res.value or len(res.sequence) != K:
                    mismatches.append((n, m, K, res.value, bf_value, replay))
                count += 1
    elapsed = time.perf_counter() - start
    ok = count >= 200 and not mismatches and elapsed < 60
    report(1, ok, f"{count} instances, {len(mismatches)} mismatches, {elapsed:.1f} s")


def test_criterion_02_example_one():
    inst = make_instance([[[1, 1], [1, 0]], [[1, 1], [0, 1]]], [2, 1], 8, "l2sq")
    X8 = {}
    for k, level in reachable_sets(inst, 8):
        X8 = set(level)
    expected = {(53, 23), (58, 41), (71, 41)}
    bf_value, _, _ = brute_force(inst)
    res = solve(inst)
    ok = expected <= X8 and res.value == bf_value
    report(2, ok, f"X_8 has {len(X8)} points, targets present={expected <= X8}, "
                  f"solve={res.value} brute force={bf_value}")


def test_criterion_03_growth_bounds():
    rng = SplitMix64(303)
    start = time.perf_counter()
    plan = [(2, "any"), (3, "Q1"), (5, "Q1"), (1, "intQ1")]
    violations = []
    checked = 0
    for pair, region in plan:
        for a in sample_region(rng, region, 20):
            rep = check_growth_bounds(pair, a, 40)
            violations += [(pair, a, v) for v in rep.violations]
            checked += 1
    elapsed = time.perf_counter() - start
    ok = not violations and elapsed < 600
    report(3, ok, f"{checked} (pair, a) checks to k=40, {len(violations)} violations, {elapsed:.1f} s")


def test_criterion_04_quadrant_count():
    rng = SplitMix64(404)
    violations = []
    samples = sample_region(rng, "intQ4", 20)
    for a in samples:
        violations += check_offdiagonal_bound(a, 14)
    report(4, not violations, f"{len(samples)} starting points to k=14, {len(violations)} violations")


def test_criterion_05_similarity():
    rng = SplitMix64(505)
    failures = 0
    for t in range(50):
        n = 2 if t % 2 == 0 else 3
        mats = [[[rng.randint(-4, 4) for _ in range(n)] for _ in range(n)] for _ in range(2)]
        a = [rng.randint(-6, 6) for _ in range(n)]
        if not any(a):
            a[0] = 1
        S = random_unimodular(rng, n)
        failures += not check_similarity_invariance(mats, S, a, 12)
    report(5, failures == 0, f"50 triples to k=12, {failures} differing traces")


def test_criterion_06_structured_families():
    bad = {}
    for kind in ("rank-one", "shared-eigenvector", "commuting"):
        rows = structured_family_bounds(kind, 30, samples=10, seed=606)
        bad[kind] = sum(len(v) for *_, v in rows)
    report(6, not any(bad.values()), f"violations per family over 10 samples to k=30: {bad}")


def test_criterion_07_sat_reduction():
    rng = SplitMix64(707)
    formulas = [random_cnf(rng) for _ in range(100)] + [all_sign_patterns()]
    wrong = []
    for f in formulas:
        art = sat_to_instance(f)
        res = solve(art.instance)
        sat = dpll(f) is not None
        if sat != (res.value == f.num_clauses) or res.value != max_satisfiable(f):
            wrong.append(f)
    report(7, not wrong, f"{len(formulas)} formulas (incl. the 8-clause unsatisfiable one), {len(wrong)} disagreements")


@pytest.mark.parametrize("n,m,K,limit", [(2, 2, 500, 10.0), (2, 10, 500, 10.0), (5, 5, 100, 60.0)])
def test_criterion_08_performance(n, m, K, limit):
    inst = gen_random(GenSpec(n, m, K, seed=808, mode=FLOAT))
    start = time.perf_counter()
    res = solve(inst, SolverOptions(rescale=True))
    elapsed = time.perf_counter() - start
    report(8, elapsed < limit, f"(n,m,K)=({n},{m},{K}) in {elapsed:.2f} s (limit {limit:g} s), max N_k={max(res.nk_trace)}")


def test_criterion_09_hull_engines():
    rng = SplitMix64(909)
    mismatches = 0
    for _ in range(1000):
        pts = random_point_set(rng, rng.randint(1, 200))
        graham = set(extreme_points(pts, engine="graham"))
        lp = set(extreme_points(pts, engine="lp"))
        mismatches += not (graham == lp == pairwise_extreme_points(pts))
    report(9, mismatches == 0, f"1000 point sets, {mismatches} mismatches")


def test_criterion_10_minlp_export():
    rng = SplitMix64(1010)
    failures = []
    for t in range(20):
        exact = t % 2 == 0
        n, m, K = rng.randint(2, 4), rng.randint(2, 3), rng.randint(2, 8)
        inst = gen_random(GenSpec(n, m, K, seed=rng.next_u64(), mode=INTEGER if exact else FLOAT))
        if t % 4 == 0:
            c = [rng.randint(-5, 5) for _ in range(n)]
            inst = make_instance(inst.matrices, inst.a, K, "linear", EXACT, c=c)
        res = solve(inst)
        dat = parse_dat(export_minlp(inst).data, exact=exact)
        xs, z = trajectory(inst, res.sequence)
        worst, value = check_solution(dat, xs, z, inst.objective.kind, relative=not exact)
        if exact:
            ok = worst == 0 and value == res.value
        else:
            ok = worst <= 1e-9 and abs(value - res.value) <= 1e-9 * max(1.0, abs(res.value))
        if not ok:
            failures.append((t, worst, value, res.value))
    report(10, not failures, f"20 instances, {len(failures)} failing substitutions")
