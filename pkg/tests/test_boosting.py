import numpy as np
import pytest

from adl.boosting import (
    BoostConfig,
    BoostingError,
    WeakLearnerFailure,
    WeakLearnerHandle,
    aboost_di_run,
    aboost_run,
    delta_schedule,
    di_budget,
)
from adl.bruteforce import opt_enumerate
from adl.domain import Constant, Disjunction, hypothesis_error

from conftest import band_instance


def _opt_handle(gamma=0.05):
    return WeakLearnerHandle(lambda view, seed: Disjunction(opt_enumerate(view)[1]), 0.0, gamma, "opt")


def test_realizable_opt_finder_is_exact():
    d = band_instance(8, (0, 3), 0.0, 1)
    run = aboost_run(_opt_handle(), d, 0.0, 0.05)
    assert run.error == 0
    assert run.round_errors[0] == 0
    assert hypothesis_error(run.hypothesis, d) == 0


def test_constant_zero_weak_learner_raises():
    d = band_instance(8, (0, 3), 0.0, 1)
    # labels are balanced enough that predicting 0 everywhere is not gamma-weak
    d_err = float(d.weights @ d.y)
    assert d_err > 0.5 - 0.2
    weak = WeakLearnerHandle(lambda view, seed: Constant(0), 0.0, 0.2)
    with pytest.raises(BoostingError) as exc:
        aboost_run(weak, d, 0.0, 0.2, BoostConfig(retries=3))
    assert exc.value.round_index == 1


def test_failing_weak_learner_counts_retries():
    d = band_instance(6, (1,), 0.0, 0)

    def fn(view, seed):
        raise WeakLearnerFailure("no")
    with pytest.raises(BoostingError):
        aboost_run(WeakLearnerHandle(fn, 0.0, 0.1), d, 0.0, 0.1, BoostConfig(retries=4))


def test_potential_non_increasing_and_bounded():
    d = band_instance(8, (0, 2, 5), 0.15, 4)
    run = aboost_run(_opt_handle(), d, 0.0, 0.05, BoostConfig(rounds=8))
    pots = np.array(run.potentials)
    assert pots[0] == pytest.approx(1.0)
    assert np.all(np.diff(pots) <= 1e-12)
    assert run.error <= opt_enumerate(d)[0] + 1e-12


def test_round_budget_and_schedule():
    cfg = BoostConfig(c=1.0, max_rounds=40)
    assert cfg.round_budget(0.5) == 4
    assert cfg.round_budget(0.01) == 40
    assert BoostConfig(rounds=3).round_budget(0.01) == 3
    assert delta_schedule(0.1) == [0.25, 0.125, 0.1]
    assert delta_schedule(0.03125) == [0.25, 0.125, 0.0625, 0.03125]
    assert di_budget(0.5, 0.25) == int(np.ceil(4 * 4 * np.log(4)))


def test_di_run_validates_prefixes():
    d = band_instance(8, (0, 4), 0.1, 2)
    run = aboost_di_run(_opt_handle(), d, 0.0, 0.05, 0.1)
    assert run.schedule == delta_schedule(0.1)
    assert run.chosen_delta in run.schedule
    assert run.error == pytest.approx(hypothesis_error(run.hypothesis, d))
    assert run.error <= opt_enumerate(d)[0] + 0.1
