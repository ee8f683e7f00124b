import random

import pytest

from qamean import POSITIVE, REAL, WeightedSample, build, from_coeffs, identity

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return random.Random(1234)


@pytest.fixture
def power_family():
    f = identity(POSITIVE)
    return build(f, from_coeffs(f, 2.0, 0.0))[0]


@pytest.fixture
def logexp_family():
    f = identity(REAL)
    return build(f, from_coeffs(f, 1.0, 1.0))[0]


@pytest.fixture
def half_1_7():
    return WeightedSample((1.0, 7.0), (0.5, 0.5))
