import numpy as np
import pytest

from adl.csq_weak import (
    CsqLearnerError,
    ParityBasis,
    constraint_points,
    csq_degree,
    csq_weak_learner_run,
    from_pm,
    parity_correlations,
    solve_parity_lp,
    threshold_grid,
    to_pm,
)
from adl.distributions import ExplicitDistribution
from adl.domain import all_points, hypothesis_error
from adl.sqoracle import SqOracle

from conftest import band_instance


@pytest.mark.parametrize("n,d", [(3, 3), (5, 2), (8, 2)])
def test_parities_orthonormal_under_uniform(n, d):
    b = ParityBasis(n, d)
    G = b.evaluate(all_points(n))
    assert np.allclose(G.T @ G / 2**n, np.eye(len(b)))


def test_basis_order_and_pm_roundtrip():
    assert ParityBasis(3, 2).sets == [(), (0,), (1,), (2,), (0, 1), (0, 2), (1, 2)]
    bits = np.array([0, 1, 1, 0])
    assert list(from_pm(to_pm(bits))) == list(bits)


def test_dictator_correlation_is_one():
    X = all_points(4)
    d = ExplicitDistribution(4, X, X[:, 0], np.full(16, 1 / 16))
    b = ParityBasis(4, 1)
    corr = parity_correlations(SqOracle(d).csq_view(), b, 0.01)
    assert corr[b.sets.index((0,))] == pytest.approx(1.0)
    assert np.allclose(np.delete(corr, b.sets.index((0,))), 0)


def test_zero_estimates_give_zero_objective():
    b = ParityBasis(4, 2)
    p = solve_parity_lp(np.zeros(len(b)), b, all_points(4))
    assert p.objective == pytest.approx(0.0, abs=1e-9)


def test_lp_solution_is_bounded():
    rng = np.random.default_rng(0)
    b = ParityBasis(6, 2)
    pts = all_points(6)
    for _ in range(5):
        p = solve_parity_lp(rng.uniform(-1, 1, len(b)), b, pts)
        assert np.all(np.abs(p.evaluate(pts)) <= 1 + 1e-7)
        assert np.all(np.abs(p.coefs) <= 1 + 1e-9)


def test_grid_and_degree():
    g = threshold_grid(0.8, 0.125)
    assert g[0] == -1 and g[-1] == 1
    assert np.allclose(np.diff(g)[1:-1], 0.1)
    assert 0.0 in g
    assert csq_degree(16, 0.25) == 16
    with pytest.raises(ValueError):
        constraint_points(20)
    pts = constraint_points(20, "support+random", random_points=50)
    assert pts.shape[1] == 20


def test_learner_on_dictator_uses_correlational_queries_only():
    d = band_instance(6, (2,), 0.05, 3)
    view = SqOracle(d).csq_view()
    res = csq_weak_learner_run(view, 0.2, 2)
    assert hypothesis_error(res.hypothesis, d) <= 0.5 - 0.2 / 16
    assert all(k.startswith(("parity", "sign")) for k, _ in view.budget.history)


def test_learner_rejects_noise():
    X = all_points(4)
    d = ExplicitDistribution(4, np.vstack([X, X]), [0] * 16 + [1] * 16, np.full(32, 1 / 32))
    with pytest.raises(CsqLearnerError):
        csq_weak_learner_run(SqOracle(d).csq_view(), 0.2, 2)
