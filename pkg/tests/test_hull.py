import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import pairwise_extreme_points, random_point_set
from switchmax.hull import (
    HullStats,
    SeparationError,
    extreme_points,
    extreme_points_2d,
    extreme_points_lp,
    integerize,
    lp_separation,
)
from switchmax.rng import SplitMix64

planar = st.lists(st.tuples(st.integers(-30, 30), st.integers(-30, 30)), min_size=1, max_size=40)


@settings(max_examples=150, deadline=None)
@given(planar)
def test_graham_lp_and_oracle_agree(pts):
    expected = pairwise_extreme_points(pts)
    assert set(extreme_points_2d(pts)) == expected
    assert set(extreme_points_lp(pts)) == expected
    assert set(extreme_points_lp(pts, method="direct")) == expected


@settings(max_examples=60, deadline=None)
@given(planar)
def test_float_input_matches_exact(pts):
    exact = set(extreme_points(pts, engine="lp"))
    flt = extreme_points([(float(x), float(y)) for x, y in pts], engine="lp")
    assert {(int(x), int(y)) for x, y in flt} == exact


def test_graham_output_is_counter_clockwise():
    square = [(2, 2), (0, 0), (2, 0), (0, 2), (1, 1), (1, 0)]
    assert extreme_points_2d(square) == [(0, 0), (2, 0), (2, 2), (0, 2)]


def test_degenerate_sets():
    assert extreme_points([(3, 3), (3, 3)]) == [(3, 3)]
    line = [(0, 0), (1, 1), (2, 2), (5, 5), (3, 3)]
    assert set(extreme_points(line, engine="graham")) == {(0, 0), (5, 5)}
    assert set(extreme_points(line, engine="lp")) == {(0, 0), (5, 5)}
    with pytest.raises(ValueError):
        extreme_points([])


def _cube_points(rng, n, count):
    return [tuple(rng.randint(-6, 6) for _ in range(n)) for _ in range(count)]


def _extreme_by_lp_direct(points):
    pts = list(dict.fromkeys(points))
    return {p for j, p in enumerate(pts) if lp_separation(pts, j).value > 0}


@pytest.mark.parametrize("n", [3, 4, 5])
def test_higher_dimensions(n):
    rng = SplitMix64(n)
    for _ in range(12):
        pts = _cube_points(rng, n, rng.randint(1, 40 if n == 3 else 20))
        assert set(extreme_points(pts)) == _extreme_by_lp_direct(pts)
    cube = list(itertools.product((0, 1), repeat=n)) + [tuple([Fraction(1, 2)] * n)]
    assert set(extreme_points(cube)) == set(itertools.product((0, 1), repeat=n))


def test_separation_certificate_separates():
    rng = SplitMix64(7)
    for _ in range(40):
        pts = list(dict.fromkeys(_cube_points(rng, 3, 12)))
        for j, p in enumerate(pts):
            cert = lp_separation(pts, j)
            lhs = lambda q: sum(z * v for z, v in zip(cert.z, q)) - cert.z0
            assert lhs(p) == cert.value
            assert all(lhs(q) <= 0 for i, q in enumerate(pts) if i != j)


def test_separation_rejects_duplicates_and_bad_index():
    with pytest.raises(ValueError):
        lp_separation([(0, 0), (0, 0)], 0)
    with pytest.raises(IndexError):
        lp_separation([(0, 0)], 3)
    assert issubclass(SeparationError, RuntimeError)


def test_clarkson_uses_fewer_lps_than_direct():
    rng = SplitMix64(11)
    pts = list(dict.fromkeys(_cube_points(rng, 3, 80)))
    fast, slow = HullStats(), HullStats()
    assert extreme_points_lp(pts, stats=fast) == extreme_points_lp(pts, method="direct", stats=slow)
    assert slow.lp_calls == len(pts)
    assert fast.lp_calls < slow.lp_calls


def test_integerize_common_denominator():
    ints = integerize([(Fraction(1, 2), 3), (Fraction(-1, 3), Fraction(2, 3))])
    assert [tuple(p) for p in ints] == [(3, 18), (-2, 4)]


def test_injected_duplicates_and_runs():
    rng = SplitMix64(21)
    for _ in range(50):
        pts = random_point_set(rng, rng.randint(1, 80))
        assert set(extreme_points(pts, engine="graham")) == pairwise_extreme_points(pts)


def test_named_examples():
    tri = [(0, 0), (4, 0), (0, 4), (1, 1)]
    assert lp_separation(tri, 3).value == 0
    assert lp_separation(tri, 1).value == 1
    seg = [(0, 0, 0), (2, 2, 2), (1, 1, 1)]
    assert lp_separation(seg, 2).value == 0
    cross4 = [tuple(s * int(i == j) for j in range(4)) for i in range(4) for s in (1, -1)]
    assert set(extreme_points(cross4 + [(0, 0, 0, 0)])) == set(cross4)


@settings(max_examples=60, deadline=None)
@given(planar, st.sampled_from([((2, 1), (1, 1)), ((1, 3), (0, -1)), ((-1, 0), (4, 1))]))
def test_idempotence_affine_invariance_soundness(pts, S):
    ext = extreme_points(pts, engine="lp")
    assert set(extreme_points(ext, engine="lp")) == set(ext)
    assert set(ext) <= set(pts)
    mapped = [(S[0][0] * x + S[0][1] * y, S[1][0] * x + S[1][1] * y) for x, y in pts]
    assert set(extreme_points(mapped)) == {(S[0][0] * x + S[0][1] * y, S[1][0] * x + S[1][1] * y) for x, y in ext}
    # every input point lies in conv(ext): adding it never creates a vertex
    for p in pts[:5]:
        assert set(extreme_points(ext + [p], engine="lp")) == set(ext)
