from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from switchmax.core import (
    EXACT,
    FLOAT,
    InstanceFormatError,
    ObjectiveDescriptor,
    apply_sequence,
    determinant,
    emit_instance,
    identity,
    integer_scaling,
    make_instance,
    mat_inverse,
    mat_mul,
    matrix,
    parse_instance,
)


def fib_instance(K=8):
    return make_instance([[[1, 1], [1, 0]], [[1, 1], [0, 1]]], [2, 1], K)


def test_apply_sequence_time_order():
    inst = fib_instance()
    # B first, then A: A(B a) = A (3, 1) = (4, 3)
    assert apply_sequence(inst, [1, 0]) == (4, 3)
    assert apply_sequence(inst, []) == (2, 1)
    with pytest.raises(IndexError):
        apply_sequence(inst, [2])


def test_instance_validation():
    with pytest.raises(TypeError):
        make_instance([[[1.5, 0], [0, 1]]], [1, 0], 2)
    with pytest.raises(ValueError):
        make_instance([[[1, 0], [0, 1]]], [1, 0, 0], 2)
    with pytest.raises(ValueError):
        make_instance([[[1, 0], [0, 1]]], [1, 0], -1)
    with pytest.raises(ValueError):
        ObjectiveDescriptor("linear")
    with pytest.raises(ValueError):
        ObjectiveDescriptor("cubic")


def test_objective_degrees():
    assert ObjectiveDescriptor("l2sq").degree == 2
    assert ObjectiveDescriptor("l1").homogeneous
    assert not ObjectiveDescriptor("external", name="f").homogeneous


def test_linear_algebra_helpers():
    A = matrix([[2, 1], [7, 4]])
    assert determinant(A) == 1
    assert mat_mul(A, mat_inverse(A)) == identity(2)
    with pytest.raises(ZeroDivisionError):
        mat_inverse(matrix([[1, 2], [2, 4]]))


def test_integer_scaling():
    inst = make_instance([[["1/2", "1/3"], [0, 1]]], ["3/4", 1], 1)
    A_int, a_int, D, d = integer_scaling(inst)
    assert (D, d) == (6, 4)
    assert A_int[0] == ((3, 2), (0, 6))
    assert a_int == (3, 4)


def test_round_trip_exact_and_float():
    exact = make_instance([[["1/2", 3], [-1, 0]], [[0, 1], [1, 0]]], ["2/3", -5], 4, "linear", c=[1, "-1/7"])
    assert parse_instance(emit_instance(exact)) == exact
    flt = make_instance([[[0.1, 2e-7], [1.0, -3.5]]], [1.0, 0.25], 3, "linf", FLOAT)
    assert parse_instance(emit_instance(flt)) == flt


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 6), st.data())
def test_round_trip_property(n, m, K, data):
    frac = st.fractions(min_value=-50, max_value=50, max_denominator=20)
    mats = [[[data.draw(frac) for _ in range(n)] for _ in range(n)] for _ in range(m)]
    a = [data.draw(frac) for _ in range(n)]
    inst = make_instance(mats, a, K, data.draw(st.sampled_from(["l1", "l2sq", "linf"])))
    assert parse_instance(emit_instance(inst)) == inst


@pytest.mark.parametrize("text,field", [
    ('{"m": 1, "K": 1, "arithmetic": "exact", "matrices": [[[1]]], "a": [1]}', "n"),
    ('{"n": 1, "m": 2, "K": 1, "arithmetic": "exact", "matrices": [[[1]]], "a": [1]}', "matrices"),
    ('{"n": 1, "m": 1, "K": 1, "arithmetic": "exact", "matrices": [[[0.5]]], "a": [1]}', "matrices[0][0][0]"),
    ('{"n": 1, "m": 1, "K": 1, "arithmetic": "exact", "matrices": [[[1]]], "a": [1],'
     ' "objective": {"kind": "linear"}}', "objective.c"),
    ('{"n": 1, "m": 1, "K": -2, "arithmetic": "exact", "matrices": [[[1]]], "a": [1]}', "K"),
    ('{"n": 1, "m": 1, "K": 1, "arithmetic": "fuzzy", "matrices": [[[1]]], "a": [1]}', "arithmetic"),
])
def test_parse_errors_name_the_field(text, field):
    with pytest.raises(InstanceFormatError) as info:
        parse_instance(text)
    assert info.value.field == field


def test_parse_error_reports_line():
    with pytest.raises(InstanceFormatError) as info:
        parse_instance('{\n  "n": 1,\n  "m": 1\n  "K": 1}')
    assert info.value.line == 4


def test_exact_accepts_rational_strings():
    inst = parse_instance('{"n": 1, "m": 1, "K": 1, "arithmetic": "exact", "matrices": [[["-3/6"]]], "a": [2]}')
    assert inst.matrices[0][0][0] == Fraction(-1, 2)
    assert inst.arithmetic == EXACT
