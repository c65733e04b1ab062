import numpy as np
import pytest

from adl.distributions import ExplicitDistribution
from adl.domain import (
    BitVector,
    Complement,
    Constant,
    CoordinateOne,
    DecisionList,
    DimensionError,
    Disjunction,
    GeneralDisjunction,
    Intersection,
    MonotoneDisjunction,
    RegionSplit,
    WeightAtMost,
    WeightMoreThan,
    WeightedMajority,
    all_points,
    eval_disjunction,
    hamming_weight_on,
    hypothesis_error,
    monotonize_instance,
    monotonize_points,
    pack_rows,
)


def test_bitvector_roundtrip():
    x = BitVector.from_string("10110")
    assert x.n == 5
    assert [x[i] for i in range(5)] == [1, 0, 1, 1, 0]
    assert x.to_string() == "10110"
    assert BitVector.from_array(x.to_array()) == x
    assert x.weight() == 3
    assert x.weight({1, 4}) == 0


def test_bitvector_rejects_bad_string():
    with pytest.raises(ValueError):
        BitVector.from_string("10a")


def test_disjunction_evaluation():
    f = MonotoneDisjunction({0, 2}, 4)
    assert eval_disjunction(f, BitVector.from_string("0010")) == 1
    assert eval_disjunction(f, BitVector.from_string("0101")) == 0
    assert eval_disjunction(MonotoneDisjunction(set(), 4), BitVector.from_string("1111")) == 0


def test_disjunction_dimension_mismatch():
    f = MonotoneDisjunction({5}, 6)
    with pytest.raises(DimensionError):
        eval_disjunction(f, BitVector.from_string("0001"))


def test_weight_on_subset():
    X = np.array([[1, 1, 0, 1], [0, 0, 0, 0]], dtype=np.uint8)
    assert list(hamming_weight_on(X, [0, 3])) == [2, 0]


def test_regions_partition():
    X = all_points(4)
    light = WeightAtMost({0, 1, 2}, 1)
    heavy = WeightMoreThan({0, 1, 2}, 1)
    assert np.all(light.contains(X) ^ heavy.contains(X))
    U = Intersection([Complement(CoordinateOne(3)), light])
    assert np.array_equal(U.contains(X), (X[:, 3] == 0) & (X[:, :3].sum(axis=1) <= 1))
    assert np.all(Intersection().contains(X))


def test_decision_list_first_match():
    X = all_points(3)
    dl = DecisionList([(CoordinateOne(0), Constant(1)), (CoordinateOne(1), Constant(0))], Constant(1))
    want = np.where(X[:, 0] == 1, 1, np.where(X[:, 1] == 1, 0, 1))
    assert np.array_equal(dl.predict(X), want)


def test_region_split_and_majority():
    X = all_points(3)
    h = RegionSplit(CoordinateOne(2), Constant(1), Disjunction(MonotoneDisjunction({0}, 3)))
    assert np.array_equal(h.predict(X), ((X[:, 2] == 1) | (X[:, 0] == 1)).astype(np.uint8))
    wm = WeightedMajority([(1.0, Constant(1)), (2.0, Constant(0))])
    assert np.all(wm.predict(X) == 0)


def test_hypothesis_error_accepts_disjunction(tiny):
    assert hypothesis_error(MonotoneDisjunction(set(), 1), tiny) == pytest.approx(0.5)
    assert hypothesis_error(Constant(1), tiny) == pytest.approx(0.5)


def test_general_enumeration_order():
    gs = list(GeneralDisjunction.enumerate(2))
    assert len(gs) == 9
    assert gs[0] == GeneralDisjunction()
    assert gs[1] == GeneralDisjunction([1], [])
    assert gs[2] == GeneralDisjunction([], [1])


def test_monotonize_preserves_value():
    X = all_points(3)
    for g in GeneralDisjunction.enumerate(3):
        assert np.array_equal(g(X), g.monotone_image(3)(monotonize_points(X)))


def test_monotonize_instance_keeps_weights():
    d = ExplicitDistribution(2, [[0, 1], [1, 1]], [1, 0], [0.25, 0.75])
    m = monotonize_instance(d)
    assert m.n == 4
    assert m.weights.sum() == pytest.approx(1)
    assert monotonize_instance(BitVector.from_string("01")).to_string() == "0110"


def test_all_points_and_packing():
    X = all_points(5)
    assert np.array_equal(pack_rows(X), np.arange(32))
