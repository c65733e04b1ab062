import numpy as np
import pytest

from adl.distributions import (
    EmpiricalSample,
    ExplicitDistribution,
    HeavyLightMixture,
    UniformList,
    WeightBand,
    condition_on,
    draw,
    gen_elimination,
    gen_planted,
    gen_random,
    marginal_points,
    read_examples,
    reweighted,
    vc_sample_size,
    write_examples,
)
from adl.domain import CoordinateOne, MonotoneDisjunction, hypothesis_error


def test_probabilities_must_sum_to_one():
    with pytest.raises(ValueError):
        ExplicitDistribution(2, [[0, 1]], [1], [0.9])
    with pytest.raises(ValueError):
        ExplicitDistribution(2, [[0, 1]], [2], [1.0])


def test_duplicates_merge():
    d = ExplicitDistribution(2, [[0, 1], [0, 1], [1, 1]], [1, 1, 0], [0.25, 0.25, 0.5])
    assert len(d) == 2
    assert sorted(d.weights) == [0.5, 0.5]


def test_planted_error_is_eta():
    d = gen_planted(12, (0, 3, 7), WeightBand(0, 4, "sample", 80), 0.15, 5)
    assert hypothesis_error(MonotoneDisjunction({0, 3, 7}, 12), d) == pytest.approx(0.15)
    assert d.planted == ((0, 3, 7), 0.15)


def test_band_enumeration():
    X, p = marginal_points(5, WeightBand(1, 2), np.random.default_rng(0))
    assert len(X) == 5 + 10
    assert p.sum() == pytest.approx(1)
    assert set(X.sum(axis=1)) == {1, 2}


def test_heavy_light_masses():
    X, p = marginal_points(20, HeavyLightMixture(0.3, 5, 16), np.random.default_rng(1))
    heavy = X.sum(axis=1) > 5
    assert p[heavy].sum() == pytest.approx(0.3)


def test_uniform_list_dimension():
    with pytest.raises(Exception):
        marginal_points(3, UniformList(["0101"]), np.random.default_rng(0))


def test_elimination_heavy_split():
    d = gen_elimination(30, (0, 1), 10, 0.6, 0.0, rng_seed=2)
    f = MonotoneDisjunction({0, 1}, 30)
    heavy = d.X.sum(axis=1) > 10
    assert d.weights[heavy & (f(d.X) == 1)].sum() == pytest.approx(0.3)
    assert d.weights[heavy & (f(d.X) == 0)].sum() == pytest.approx(0.3)


def test_draw_is_seeded():
    d = gen_random(6, 20, 1)
    a, b = draw(d, 50, 7), draw(d, 50, 7)
    assert np.array_equal(a.X, b.X) and np.array_equal(a.y, b.y)
    assert isinstance(a, EmpiricalSample)
    assert a.to_explicit().weights.sum() == pytest.approx(1)


def test_condition_and_reweight():
    d = gen_random(5, 25, 3)
    c = condition_on(d, CoordinateOne(0))
    assert np.all(c.X[:, 0] == 1)
    assert c.weights.sum() == pytest.approx(1)
    r = reweighted(d, np.arange(len(d)))
    assert len(r) == len(d) - 1


def test_vc_size_monotone():
    assert vc_sample_size(10, 0.1) < vc_sample_size(10, 0.05) < vc_sample_size(20, 0.05)


def test_file_roundtrip(tmp_path):
    d = gen_planted(6, (2,), WeightBand(0, 6, "sample", 20), 0.1, 4)
    path = tmp_path / "d.txt"
    write_examples(path, d)
    back = read_examples(path)
    assert np.array_equal(back.X, d.X) and np.allclose(back.weights, d.weights)
    assert back.planted == ((2,), 0.1)
    s = draw(d, 10, 0)
    write_examples(tmp_path / "s.txt", s)
    assert isinstance(read_examples(tmp_path / "s.txt"), EmpiricalSample)


def test_file_rejects_bad_rows(tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("n=3\n0101 1 1.0\n")
    with pytest.raises(ValueError):
        read_examples(p)
    p.write_text("n=2\n01 1 0.5\n")
    with pytest.raises(ValueError):
        read_examples(p)
