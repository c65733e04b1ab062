import math

import numpy as np
import pytest
from numpy.polynomial import chebyshev as C

from adl.chebyshev import (
    UnivariatePoly,
    approx_degree,
    build_approx,
    certify_approx,
    chebyshev_eval,
    lift,
    small_eps_power,
)
from adl.domain import BitVector, all_points


@pytest.mark.parametrize("d", [0, 1, 2, 5, 17, 60])
def test_recurrence_matches_numpy(d):
    t = np.linspace(-1.3, 1.3, 101)
    assert np.allclose(chebyshev_eval(d, t), C.chebval(t, [0] * d + [1]), rtol=1e-10, atol=1e-10)


def test_chebyshev_small_values():
    assert chebyshev_eval(2, 0.5) == pytest.approx(-0.5)
    assert chebyshev_eval(3, 1.0) == pytest.approx(1.0)


def test_degree_formulas():
    assert approx_degree(25, 0.3) == 7
    assert approx_degree(100, 0.01) == 140
    assert approx_degree(1, 0.2) == 1
    assert small_eps_power(0.01) == 7
    assert small_eps_power(0.25) == 2


@pytest.mark.parametrize("r,eps", [(1, 0.3), (1, 0.05), (4, 0.25), (16, 0.1), (49, 0.02), (100, 0.3)])
def test_certification(r, eps):
    q = build_approx(r, eps)
    rep = certify_approx(q, r, eps)
    assert rep.passed
    assert rep.degree == q.degree


def test_zero_value_within_eps():
    q = build_approx(25, 0.1)
    assert 0 <= q(0.0) <= 0.1 + 1e-9


def test_constant_target_rejects_disjunction_approximator():
    q = build_approx(9, 0.1)
    assert not certify_approx(q, 9, 0.1, target="constant1").passed
    assert certify_approx(UnivariatePoly.constant(1.0), 9, 0.1, target="constant1").passed


def test_bad_parameters():
    with pytest.raises(ValueError):
        build_approx(0, 0.1)
    with pytest.raises(ValueError):
        build_approx(4, 0.5)


def test_monomial_coefficients_agree_at_low_degree():
    p = UnivariatePoly.from_coefficients([1.0, -2.0, 0.5])
    assert np.allclose(p.coefficients(), [1.0, -2.0, 0.5])
    assert p(2.0) == pytest.approx(1 - 4 + 2)


def test_lift_is_multilinear_in_weight():
    q = build_approx(4, 0.1)
    P = lift(q, {0, 2, 3})
    X = all_points(5)
    w = X[:, [0, 2, 3]].sum(axis=1)
    assert np.allclose(P.evaluate(X), q(w.astype(float)))
    assert P(BitVector.from_string("10110")) == pytest.approx(q(3.0))
    assert P.degree == min(q.degree, 3)
