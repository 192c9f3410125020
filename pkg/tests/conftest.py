"""
Shared fixtures and strategies
"""

from fractions import Fraction
from typing import List

import pytest
from hypothesis import strategies as st

from o2gasket.schemas.series import GSequence
from o2gasket.services.weights.builtins import budd_ring_sequence, builtin_example


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run full-size acceptance runs")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def zero_g() -> GSequence:
    return GSequence.zero()


@pytest.fixture(scope="session")
def budd_g() -> GSequence:
    return budd_ring_sequence()


@pytest.fixture
def half_g() -> GSequence:
    """g_2 = 1/2, on the boundary sum_j j g_j = 1"""
    return GSequence.from_fractions([Fraction(0), Fraction(1, 2)])


@pytest.fixture(scope="session")
def budd_example():
    return builtin_example("budd_symmetric")


@pytest.fixture(scope="session")
def fully_packed_example():
    return builtin_example("fully_packed")


def make_g(weights: List[float], sigma: float) -> GSequence:
    """Scale non-negative weights so that sum_j j g_j = sigma"""
    moment = sum(j * w for j, w in enumerate(weights, start=1))
    return GSequence(entries=[w * sigma / moment for w in weights])


@st.composite
def valid_g(draw, max_support: int = 6) -> GSequence:
    """Finitely supported ring weights with first moment in [0.3, 0.95]"""
    weights = draw(st.lists(st.floats(0.0, 1.0), min_size=1, max_size=max_support))
    weights[-1] = max(weights[-1], 0.05)
    sigma = draw(st.floats(0.3, 0.95))
    return make_g(weights, sigma)


# Ten fixed sequences for the suites that are too slow to run under hypothesis
RANDOM_G_WEIGHTS = [
    ([0.4], 0.5),
    ([0.1, 0.3], 0.9),
    ([0.2, 0.0, 0.5], 0.7),
    ([0.05, 0.05, 0.05, 0.05], 0.95),
    ([1.0, 0.5, 0.25, 0.125, 0.0625], 0.8),
    ([0.0, 0.0, 0.0, 0.0, 0.0, 1.0], 0.3),
    ([0.3, 0.2, 0.1, 0.2, 0.3, 0.4], 0.6),
    ([0.9, 0.1], 0.4),
    ([0.0, 1.0], 0.85),
    ([0.2, 0.7, 0.1], 0.65),
]


@pytest.fixture(params=range(len(RANDOM_G_WEIGHTS)), ids=lambda i: f"g{i}")
def random_g(request) -> GSequence:
    weights, sigma = RANDOM_G_WEIGHTS[request.param]
    return make_g(weights, sigma)
