from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from switchmax.hull import INFEASIBLE, OPTIMAL, UNBOUNDED, LpProblem, feasibility, lp_solve

linprog = pytest.importorskip("scipy.optimize").linprog


def test_small_exact_optimum_and_duals():
    # max x + y s.t. x + 2y <= 4, 3x + y <= 6  ->  (8/5, 6/5), value 14/5
    p = LpProblem(c=[1, 1], A_ub=[[1, 2], [3, 1]], b_ub=[4, 6])
    sol = lp_solve(p)
    assert sol.status == OPTIMAL
    assert sol.x == (Fraction(8, 5), Fraction(6, 5))
    assert sol.objective == Fraction(14, 5)
    # strong duality: b . y equals the primal objective
    assert sum(b * y for b, y in zip(p.b_ub, sol.duals_ub)) == sol.objective


def test_unbounded_and_infeasible():
    assert lp_solve(LpProblem(c=[1, 0], A_ub=[[-1, 1]], b_ub=[1])).status == UNBOUNDED
    sol = lp_solve(LpProblem(c=[1], A_eq=[[1], [1]], b_eq=[1, 2]))
    assert sol.status == INFEASIBLE


def test_free_variables():
    sol = lp_solve(LpProblem(c=[-1], A_ub=[[-1]], b_ub=[3], free=[True]))
    assert sol.x == (Fraction(-3),)


def test_degenerate_cycling_example():
    # Beale's cycling example (as a maximization); Bland's rule must terminate
    c = [Fraction(-3, 4), 20, Fraction(-1, 2), 6]
    A = [[Fraction(1, 4), -8, -1, 9], [Fraction(1, 2), -12, Fraction(-1, 2), 3], [0, 0, 1, 0]]
    sol = lp_solve(LpProblem(c=[-v for v in c], A_ub=A, b_ub=[0, 0, 1]))
    assert sol.status == OPTIMAL
    assert sol.objective == Fraction(5, 4)


def test_feasibility_farkas_certificate():
    A = [[1, 1], [1, -1]]
    x, y = feasibility(A, [-1, 0], exact=True)
    assert x is None
    yA = [sum(y[i] * A[i][j] for i in range(2)) for j in range(2)]
    assert all(v >= 0 for v in yA) and y[0] * -1 + y[1] * 0 < 0
    x, y = feasibility(A, [2, 0], exact=True)
    assert y is None and list(x) == [1, 1] and all(isinstance(v, Fraction) for v in x)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 4), st.integers(1, 5), st.data())
def test_matches_scipy(nv, nc, data):
    ints = st.integers(-6, 6)
    c = [data.draw(ints) for _ in range(nv)]
    A = [[data.draw(ints) for _ in range(nv)] for _ in range(nc)]
    b = [data.draw(st.integers(0, 10)) for _ in range(nc)]
    # box keeps the reference bounded
    A += [[int(i == j) for j in range(nv)] for i in range(nv)]
    b += [5] * nv
    ours = lp_solve(LpProblem(c=[-v for v in c], A_ub=A, b_ub=b))
    ref = linprog(c, A_ub=A, b_ub=b, bounds=[(0, None)] * nv, method="highs")
    assert ours.status == OPTIMAL and ref.status == 0
    assert float(ours.objective) == pytest.approx(-ref.fun, abs=1e-7)
    floats = lp_solve(LpProblem(c=[-float(v) for v in c], A_ub=A, b_ub=[float(v) for v in b]))
    assert floats.objective == pytest.approx(-ref.fun, abs=1e-7)


def test_float_feasibility_tolerance():
    A = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    x, y = feasibility(A, [0.5, 0.5, 1.0 + 1e-13], exact=False)
    assert y is None
    x, y = feasibility(A, [0.5, 0.5, 1.1], exact=False)
    assert x is None


def test_compiled_phase_one_matches_numpy():
    from switchmax.hull._phase1 import float_membership

    rng = np.random.default_rng(3)
    for _ in range(300):
        n, k = int(rng.integers(1, 6)), int(rng.integers(1, 25))
        A = np.ones((n + 1, k))
        A[:n] = rng.uniform(-1, 1, (n, k))
        b = np.ones(n + 1)
        b[:n] = rng.uniform(-1.5, 1.5, n)
        x1, y1 = float_membership(A, b, 1e-9)
        x2, y2 = feasibility(A, b, exact=False, infeas_tol=1e-9)
        assert (x1 is None) == (x2 is None)
        if x1 is not None:
            assert np.allclose(A @ x1, b) and np.allclose(x1, x2)
        else:
            assert np.allclose(y1, y2) and y1 @ b < 0 and np.all(y1 @ A >= -1e-9)
