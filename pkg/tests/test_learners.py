import math

import numpy as np
import pytest

from adl.bruteforce import opt_enumerate
from adl.distributions import ExplicitDistribution, HeavyLightMixture, gen_planted
from adl.domain import hypothesis_error
from adl.learner_sample import Alg1Config, NoHypothesisError, alg1_weak_learner_run, forced_guess_hook
from adl.learner_sq import Alg2Config, alg2_learner, alg2_single_run, forced_correct_policy
from adl.learner_tradeoff import (
    Alg3Config,
    NoWeakHypothesis,
    alg3_single_run,
    alg3_weak_learner_run,
)
from adl.sqoracle import SqOracle

from conftest import band_instance


def _noise(n, size, seed):
    # every point carries both labels with equal mass
    X = np.random.default_rng(seed).integers(0, 2, (size, n))
    return ExplicitDistribution(n, np.vstack([X, X]), [0] * size + [1] * size, np.full(2 * size, 0.5 / size))


# ---- sample-based weak learner

def test_alg1_config_defaults():
    c = Alg1Config(eps=0.1).resolve(27)
    assert c.r == 9
    assert c.T == 4
    assert c.sample_size <= c.sample_cap
    with pytest.raises(ValueError):
        Alg1Config(eps=0.6).resolve(8)


def test_alg1_beats_half(planted8):
    res = alg1_weak_learner_run(planted8, Alg1Config(eps=0.2, repeats=20, sample_size=400))
    assert res.holdout_error <= 0.5 - 0.2 / 100
    assert hypothesis_error(res.hypothesis, planted8) < 0.5


def test_alg1_forced_hook_guesses_inside_support():
    d = gen_planted(10, (2, 5), HeavyLightMixture(0.9, 2, 20), 0.0, 7)
    res = alg1_weak_learner_run(d, Alg1Config(eps=0.2, repeats=10, sample_size=400, r=3),
                                guess_hook=forced_guess_hook((2, 5)), keep_traces=True)
    guessed = {s.coords for tr in res.traces for s in tr.steps if s.guess is not None}
    assert all(set(g) <= {2, 5} for g in guessed if g)


def test_alg1_unlearnable_raises():
    # labels independent of x
    d = _noise(4, 8, 0)
    with pytest.raises(NoHypothesisError):
        alg1_weak_learner_run(d, Alg1Config(eps=0.2, repeats=3, sample_size=200))


# ---- SQ learner

def test_alg2_config():
    c = Alg2Config(eps=0.1).resolve(8)
    assert c.r == 4
    assert c.T == math.ceil(4 * 8 * math.log(10) / 4)
    tol = Alg2Config(eps=0.1).tolerances(8)
    assert tol["light"] == pytest.approx(0.1 * 4 / 6400)


def test_alg2_forced_meets_bound(planted8):
    opt = opt_enumerate(planted8)[0]
    cfg = Alg2Config(eps=0.15, trials=1)
    pol = forced_correct_policy(planted8, Alg2Config(eps=0.05).resolve(8).r)
    res = alg2_learner(lambda k: SqOracle(planted8, seed=k), cfg, policy=pol)
    assert hypothesis_error(res.hypothesis, planted8) <= opt + 0.15 + 1e-9


def test_alg2_trace_partitions_domain(planted8):
    h, tr = alg2_single_run(SqOracle(planted8), Alg2Config(eps=0.1), 0)
    if h is not None:
        assert tr.outcome == "returned"
        assert all(s.branch in ("heavy", "light") for s in tr.steps)
        for s in tr.steps:
            assert set(s.I_after) <= set(s.I_before)


# ---- tradeoff learner

def test_alg3_config_formulas():
    c = Alg3Config(alpha=8).resolve(256)
    assert c.r == math.ceil(256 ** (2 / 3) * 8 ** (-1 / 3))
    assert c.T == math.ceil(4 * 256 / (8 * c.r))
    assert c.degree == math.ceil(4 * math.sqrt(c.r / 8))
    assert Alg3Config(alpha=8).margin(256) == pytest.approx(c.r / (16 * 256))


def test_alg3_alpha_range():
    with pytest.raises(ValueError):
        Alg3Config(alpha=3).resolve(64)
    with pytest.raises(ValueError):
        Alg3Config(alpha=9).resolve(64)
    with pytest.raises(ValueError):
        Alg3Config(alpha=8, relaxed=False).resolve(64 * 64)
    Alg3Config(alpha=64, relaxed=False).resolve(64 * 64)


def test_alg3_heavy_guess_fires():
    # almost all mass has x_0 = 1 and label 1: guessing coordinate 0 as heavy is immediately accepted
    d = gen_planted(16, (0,), HeavyLightMixture(0.95, 4, 24), 0.0, 2)
    policy = lambda t, U, I, rng: ("heavy", 0) if 0 in I else ("light", None)
    h, tr = alg3_single_run(SqOracle(d), Alg3Config(alpha=4), 0, policy)
    assert tr.outcome == "returned"
    assert tr.steps[0].branch == "heavy"
    assert hypothesis_error(h, d) < 0.5


def test_alg3_rejects_noise():
    d = _noise(16, 16, 1)
    with pytest.raises(NoWeakHypothesis):
        alg3_weak_learner_run(lambda k: SqOracle(d, seed=k), Alg3Config(alpha=4), trials=2)
