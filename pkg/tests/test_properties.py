"""Invariants checked on generated inputs."""

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from adl.bruteforce import opt_enumerate
from adl.chebyshev import build_approx, certify_approx
from adl.csq_weak import ParityBasis, solve_parity_lp
from adl.distributions import gen_random, read_examples, write_examples
from adl.domain import (
    BitVector,
    Disjunction,
    GeneralDisjunction,
    MonotoneDisjunction,
    all_points,
    hypothesis_error,
    monotonize_instance,
)
from adl.l1regression import l1_fit, round_to_hypothesis
from adl.sqoracle import SqOracle, StatQuery, ratio_estimate

FAST = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])

instances = st.builds(gen_random, st.integers(2, 7), st.integers(1, 40), st.integers(0, 2**31 - 1))


@FAST
@given(st.text(alphabet="01", min_size=1, max_size=40))
def test_bitvector_roundtrip(s):
    b = BitVector.from_string(s)
    assert b.to_string() == s
    assert b.weight() == s.count("1")


@FAST
@given(instances, st.data())
def test_opt_is_a_lower_bound(d, data):
    opt, f, _ = opt_enumerate(d)
    S = data.draw(st.sets(st.integers(0, d.n - 1)))
    assert opt <= hypothesis_error(Disjunction(MonotoneDisjunction(S, d.n)), d) + 1e-12
    assert hypothesis_error(Disjunction(f), d) == pytest.approx(opt)


@FAST
@given(instances, st.data())
def test_monotonization_preserves_error(d, data):
    lits = data.draw(st.lists(st.integers(0, 2), min_size=d.n, max_size=d.n))
    g = GeneralDisjunction([i for i, v in enumerate(lits) if v == 1], [i for i, v in enumerate(lits) if v == 2])
    m = monotonize_instance(d)
    e1 = float(d.weights @ (g(d.X) != d.y))
    mono = g.monotone_image(d.n)
    e2 = float(m.weights @ (mono(m.X) != m.y))
    assert e1 == pytest.approx(e2, abs=1e-12)


@FAST
@given(instances, st.integers(0, 3))
def test_l1_fit_beats_constants_and_rounds_well(d, deg):
    p = l1_fit(d, range(d.n), deg)
    py1 = float(d.weights @ d.y)
    assert p.loss <= min(py1, 1 - py1) + 1e-9
    h = round_to_hypothesis(p, d, eps=0.1)
    assert hypothesis_error(h, d) <= p.loss + 0.1 * 0.125 + 1e-9


@FAST
@given(st.floats(0.01, 1), st.floats(0, 1), st.floats(1e-4, 0.05), st.data())
def test_ratio_estimate_accuracy(p2, frac, tau, data):
    p1 = frac * p2
    gamma = data.draw(st.floats(1e-3, 1))
    e1 = p1 + data.draw(st.floats(-tau, tau))
    e2 = p2 + data.draw(st.floats(-tau, tau))
    if e2 - tau < gamma:
        return
    assert abs(ratio_estimate(e1, e2, tau, gamma) - p1 / p2) <= 2 * tau / gamma + 1e-12


@FAST
@given(instances, st.floats(1e-4, 0.5), st.integers(0, 1000))
def test_adversarial_answers_within_tolerance(d, tau, seed):
    o = SqOracle(d, "adversarial", seed=seed)
    q = StatQuery(lambda X, y: X[:, 0].astype(float) - y)
    truth = float(d.weights @ (d.X[:, 0].astype(float) - d.y))
    assert abs(o.stat(q, tau) - truth) <= tau + 1e-12


@FAST
@given(d=instances)
def test_example_file_roundtrip(d, tmp_path_factory):
    path = tmp_path_factory.mktemp("io") / "d.txt"
    write_examples(path, d)
    back = read_examples(path)
    assert np.array_equal(back.X, d.X) and np.array_equal(back.y, d.y)
    assert np.allclose(back.weights, d.weights, atol=1e-12)


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 64), st.sampled_from([0.3, 0.2, 0.1, 0.05]))
def test_approximator_certifies(r, eps):
    q = build_approx(r, eps)
    assert certify_approx(q, r, eps).passed


@FAST
@given(st.integers(2, 6), st.integers(0, 2), st.integers(0, 2**31 - 1))
def test_parity_lp_respects_box(n, d, seed):
    b = ParityBasis(n, d)
    est = np.random.default_rng(seed).uniform(-1, 1, len(b))
    pts = all_points(n)
    p = solve_parity_lp(est, b, pts)
    assert np.all(np.abs(p.evaluate(pts)) <= 1 + 1e-7)
    assert p.objective >= abs(est[0]) - 1e-9   # the constant +-1 is feasible
