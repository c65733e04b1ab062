import numpy as np
import pytest
from scipy.optimize import linprog

from adl.simplex import LpProblem, lp_solve


def _scipy(c, A, senses, b, bounds):
    Aub, bub, Aeq, beq = [], [], [], []
    for row, s, v in zip(A, senses, b):
        if s == "<=":
            Aub.append(row); bub.append(v)
        elif s == ">=":
            Aub.append(-row); bub.append(-v)
        else:
            Aeq.append(row); beq.append(v)
    return linprog(c, A_ub=Aub or None, b_ub=bub or None, A_eq=Aeq or None, b_eq=beq or None,
                   bounds=bounds, method="highs")


def test_agrees_with_independent_solver():
    rng = np.random.default_rng(0)
    for _ in range(300):
        n, m = rng.integers(1, 8), rng.integers(1, 8)
        A = rng.integers(-3, 4, (m, n)).astype(float)
        b = rng.integers(-3, 6, m).astype(float)
        c = rng.integers(-3, 4, n).astype(float)
        senses = list(rng.choice(["<=", ">=", "="], m))
        bounds = [(rng.choice([None, 0, -1]), rng.choice([None, 2, 5])) for _ in range(n)]
        mine = lp_solve(LpProblem(c, A, senses, b, bounds))
        ref = _scipy(c, A, senses, b, bounds)
        want = {0: "optimal", 2: "infeasible", 3: "unbounded"}[ref.status]
        assert mine.status == want
        if want == "optimal":
            assert mine.objective == pytest.approx(ref.fun, abs=1e-7)


def test_maximize_and_feasibility():
    # max x + y, x + 2y <= 4, 3x + y <= 6
    sol = lp_solve(LpProblem([1, 1], [[1, 2], [3, 1]], ["<=", "<="], [4, 6], maximize=True))
    assert sol.status == "optimal"
    assert sol.objective == pytest.approx(2.8)
    assert np.all(np.array([[1, 2], [3, 1]]) @ sol.x <= np.array([4, 6]) + 1e-9)


def test_degenerate_cycling_example():
    # Beale's classic cycling instance under Dantzig pricing
    c = [-0.75, 150, -0.02, 6]
    A = [[0.25, -60, -0.04, 9], [0.5, -90, -0.02, 3], [0, 0, 1, 0]]
    sol = lp_solve(LpProblem(c, A, ["<=", "<=", "<="], [0, 0, 1]))
    assert sol.status == "optimal"
    assert sol.objective == pytest.approx(-0.05)


def test_infeasible_and_unbounded():
    assert lp_solve(LpProblem([1], [[1], [1]], ["<=", ">="], [1, 2])).status == "infeasible"
    assert lp_solve(LpProblem([-1], [[1]], [">="], [0])).status == "unbounded"


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        LpProblem([1, 2], [[1, 2]], ["<"], [1])
    with pytest.raises(ValueError):
        LpProblem([1], [[np.inf]], ["<="], [1])
