from fractions import Fraction
import itertools

import pytest

from oracles import max_satisfiable, random_cnf
from switchmax.core import apply_sequence, mat_mul
from switchmax.reductions import (
    CnfError,
    CnfFormula,
    all_sign_patterns,
    check_k_mortal,
    clause_gadget,
    dpll,
    emit_dimacs,
    jsr_lower_bound,
    parse_dimacs,
    sat_to_instance,
)
from switchmax.rng import SplitMix64
from switchmax.solver import evaluate_objective, solve


def test_dimacs_round_trip_and_errors():
    f = CnfFormula(4, ((1, -2, 3), (-1, 2, 4)))
    assert parse_dimacs("c comment\n" + emit_dimacs(f)) == f
    with pytest.raises(CnfError):
        parse_dimacs("1 2 3 0\n")
    with pytest.raises(CnfError):
        parse_dimacs("p cnf 3 2\n1 2 3 0\n")
    with pytest.raises(CnfError):
        parse_dimacs("p cnf 3 1\n1 2 0\n")
    with pytest.raises(CnfError):
        CnfFormula(2, ((1, 2, 3),))


def test_dpll_against_truth_tables():
    rng = SplitMix64(2)
    for _ in range(200):
        f = random_cnf(rng, max_vars=5, max_clauses=12)
        model = dpll(f)
        sat = max_satisfiable(f) == f.num_clauses
        assert (model is not None) == sat
        if model is not None:
            assert f.satisfied_count(model) == f.num_clauses
    assert dpll(all_sign_patterns()) is None


def test_gadgets_are_stochastic():
    for clause in ((1, -2, 3), (-1, -2, -3)):
        for positive in (True, False):
            G = clause_gadget(clause, 3, positive)
            assert all(sum(G[r][c] for r in range(7)) == 1 for c in range(7))   # columns sum to 1


@pytest.mark.parametrize("right", [False, True])
def test_every_sequence_counts_satisfied_clauses(right):
    f = CnfFormula(3, ((1, 2, -3), (-1, 2, 3), (1, -2, -3), (-1, -2, 3)))
    art = sat_to_instance(f, right_stochastic=right)
    inst = art.instance
    for M in inst.matrices:
        sums = [sum(row) for row in M] if right else [sum(M[r][c] for r in range(len(M))) for c in range(len(M))]
        assert set(sums) == {1}
    for seq in itertools.product((0, 1), repeat=3):
        value = evaluate_objective(inst.objective, apply_sequence(inst, seq))
        assert value == f.satisfied_count(art.assignment(seq))
        assert art.sequence(art.assignment(seq)) == seq


def test_unsatisfiable_formula_optimum():
    art = sat_to_instance(all_sign_patterns())
    res = solve(art.instance)
    assert art.threshold == 8 and res.value == 7


def test_satisfying_sequence_is_recovered():
    f = CnfFormula(4, ((1, 2, 3), (-1, -2, 4), (2, -3, -4), (-2, 3, 4)))
    art = sat_to_instance(f)
    res = solve(art.instance)
    assert res.value == art.threshold
    assert f.satisfied_count(art.assignment(res.sequence)) == f.num_clauses


def test_mortality():
    # [[0,1],[0,0]] squares to zero
    assert check_k_mortal([[[0, 1], [0, 0]], [[1, 0], [0, 1]]], 2)
    assert not check_k_mortal([[[1, 1], [0, 1]], [[1, 0], [1, 1]]], 5)
    P, Q = [[1, 0], [0, 0]], [[0, 0], [0, 1]]
    assert check_k_mortal([P, Q], 2)        # P Q = 0
    assert not check_k_mortal([P, Q], 0)
    with pytest.raises(ValueError):
        check_k_mortal([[[1, -1], [0, 1]]], 2)


def test_mortality_matches_products():
    rng = SplitMix64(8)
    for _ in range(20):
        mats = [[[rng.randint(0, 1) * rng.randint(0, 1) for _ in range(3)] for _ in range(3)] for _ in range(2)]
        for k in (1, 2, 3):
            zero = False
            for seq in itertools.product(range(2), repeat=k):
                P = [[Fraction(int(i == j)) for j in range(3)] for i in range(3)]
                for s in seq:
                    P = mat_mul(mats[s], P)
                zero |= all(v == 0 for r in P for v in r)
            assert check_k_mortal(mats, k) == zero


def test_jsr_lower_bound():
    A = [[[2, 0], [0, 1]], [[0, 1], [1, 0]]]
    assert jsr_lower_bound(A, 4, [1, 0], "2") == pytest.approx(2.0)
    assert jsr_lower_bound(A, 3, [0, 1], "inf") == pytest.approx(2 ** (2 / 3))
    rot = [[[0, -1], [1, 0]]]
    assert jsr_lower_bound(rot, 5, [1, 0], "1") == pytest.approx(1.0)
    with pytest.raises(ValueError):
        jsr_lower_bound(A, 3, [1, 1], "2")
    with pytest.raises(ValueError):
        jsr_lower_bound(A, 3, [1, 0], "3")
