import numpy as np
import pytest

from adl.bruteforce import EnumerationCapError, exhaustive_hypothesis_error, opt_enumerate
from adl.distributions import ExplicitDistribution, gen_random
from adl.domain import Constant, DecisionList, CoordinateOne, MonotoneDisjunction, hypothesis_error, monotonize_instance

from conftest import band_instance


def test_tiny_const1(tiny):
    assert opt_enumerate(tiny, "monotone+const1")[0] == pytest.approx(0.5)
    assert opt_enumerate(tiny, "monotone")[2] == 2


def test_realizable_planted():
    d = band_instance(8, (0, 5), 0.0, 1)
    opt, f, _ = opt_enumerate(d)
    assert opt == 0
    assert hypothesis_error(f, d) == 0


def test_uniform_coin_labels():
    X = np.array([[a, b] for a in (0, 1) for b in (0, 1)] * 2, dtype=np.uint8)
    y = np.repeat([0, 1], 4)
    d = ExplicitDistribution(2, X, y, np.full(8, 1 / 8))
    assert opt_enumerate(d)[0] == pytest.approx(0.5)
    assert opt_enumerate(d, "general-literals")[0] == pytest.approx(0.5)


def test_lexicographic_tie_break():
    # {0}, {1}, {0,1}, {0,2}, ... are all optimal
    d = ExplicitDistribution(3, [[0, 0, 0], [1, 1, 0]], [0, 1], [0.5, 0.5])
    opt, f, _ = opt_enumerate(d)
    assert opt == 0
    assert sorted(f.support) == [0]


def test_brute_force_matches_loop():
    d = gen_random(5, 20, 4)
    best = min(hypothesis_error(MonotoneDisjunction({i for i in range(5) if m >> i & 1}, 5), d) for m in range(32))
    assert opt_enumerate(d)[0] == pytest.approx(best)


def test_class_order_invariants():
    for s in range(5):
        d = gen_random(4, 12, s)
        assert opt_enumerate(d, "monotone+const1")[0] <= opt_enumerate(d, "monotone")[0] + 1e-15
        assert opt_enumerate(monotonize_instance(d))[0] == pytest.approx(opt_enumerate(d, "general-literals")[0])


def test_cap():
    d = gen_random(30, 5, 0)
    with pytest.raises(EnumerationCapError):
        opt_enumerate(d, "general-literals")


def test_exhaustive_error_matches_support_sum():
    d = gen_random(6, 30, 2)
    h = DecisionList([(CoordinateOne(0), Constant(1))], Constant(0))
    assert exhaustive_hypothesis_error(h, d) == pytest.approx(hypothesis_error(h, d))
