import numpy as np
import pytest

from adl.distributions import ExplicitDistribution, HeavyLightMixture, WeightBand, gen_planted

ACCEPTANCE_LINES = []


@pytest.fixture
def planted8():
    return gen_planted(8, (1, 4, 6), HeavyLightMixture(0.5, 2, 24), 0.1, 3)


@pytest.fixture
def tiny():
    # two points, opposite labels, equal mass
    return ExplicitDistribution(1, [[0], [1]], [1, 0], [0.5, 0.5])


def band_instance(n, S, eta, seed, hi=None, size=64):
    return gen_planted(n, S, WeightBand(0, hi if hi is not None else n, "sample", size), eta, seed)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
