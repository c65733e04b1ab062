import numpy as np
import pytest
from scipy.optimize import linprog

from adl.bruteforce import opt_enumerate
from adl.distributions import ExplicitDistribution, WeightBand, gen_planted, gen_random
from adl.domain import hypothesis_error
from adl.l1regression import (
    FeatureCapError,
    MultilinearPolynomial,
    default_grid,
    l1_fit,
    l1_loss,
    l1_regress_learner,
    monomial_features,
    round_to_hypothesis,
)

from conftest import band_instance


def _reference_loss(d, I, deg):
    # full monomial basis, scipy LP
    feats = monomial_features(I, deg)
    F = np.column_stack([d.X[:, list(A)].all(axis=1) if A else np.ones(len(d)) for A in feats]).astype(float)
    m, k = F.shape
    c = np.concatenate([np.zeros(k), d.weights, d.weights])
    A = np.hstack([F, np.eye(m), -np.eye(m)])
    r = linprog(c, A_eq=A, b_eq=d.y.astype(float), bounds=[(None, None)] * k + [(0, None)] * 2 * m, method="highs")
    return r.fun


@pytest.mark.parametrize("seed", range(6))
def test_loss_matches_reference(seed):
    d = gen_random(6, 25, seed, max_weight=4)
    for deg in (1, 2, 3):
        p = l1_fit(d, range(6), deg)
        assert p.loss == pytest.approx(_reference_loss(d, list(range(6)), deg), abs=1e-7)
        assert l1_loss(p, d) == pytest.approx(p.loss, abs=1e-9)
        assert p.degree <= deg


def test_features_order_and_cap():
    assert [tuple(sorted(A)) for A in monomial_features([0, 1, 2], 2)] == [(), (0,), (1,), (2,), (0, 1), (0, 2), (1, 2)]
    with pytest.raises(FeatureCapError):
        monomial_features(range(40), 6, cap=1000)


def test_realizable_fit_is_exact():
    d = band_instance(7, (1, 3), 0.0, 2, hi=3)
    p = l1_fit(d, range(7), 3)
    assert p.loss == pytest.approx(0, abs=1e-9)
    h = round_to_hypothesis(p, d)
    assert hypothesis_error(h, d) == 0


def test_rounding_bound():
    # 0-1 error of the best threshold is at most the L1 loss plus the grid step
    for s in range(5):
        d = gen_random(6, 40, s, max_weight=3)
        p = l1_fit(d, range(6), 2)
        h = round_to_hypothesis(p, d, eps=0.05)
        assert hypothesis_error(h, d) <= p.loss + 0.125 * 0.05 + 1e-9


def test_grid_contents():
    g = default_grid(0.08, 0.125)
    assert g[0] == 0 and g[-1] == pytest.approx(1)
    assert np.allclose(np.diff(g), 0.01)


def test_learner_against_opt():
    for s in range(4):
        d = band_instance(8, (0, 2, 5), 0.1, s, hi=4, size=100)
        h = l1_regress_learner(d, range(8), 0.05)
        assert hypothesis_error(h, d) <= opt_enumerate(d)[0] + 0.05 + 1e-6


def test_polynomial_rejects_foreign_term():
    with pytest.raises(ValueError):
        MultilinearPolynomial({frozenset({3}): 1.0}, {0, 1})
    p = MultilinearPolynomial({frozenset(): 0.5, frozenset({0, 1}): 2.0}, {0, 1})
    assert list(p.evaluate(np.array([[1, 1], [1, 0]], dtype=np.uint8))) == [2.5, 0.5]


def test_degenerate_full_cube_instance():
    # every point of the cube with both labels: heavily degenerate LP
    d = gen_planted(8, (0, 2, 5), WeightBand(0, 8, "enumerate"), 0.1, 3)
    assert len(d) == 512
    p = l1_fit(d, range(8), 2)
    assert p.loss == pytest.approx(_reference_loss(d, list(range(8)), 2), abs=1e-7)
