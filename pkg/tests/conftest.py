"""
Shared fixtures for the placement test suite
"""

import pytest

from src.placement import ClusterMap

# node ids used by the worked examples
A, B, C, D, E = 0xA, 0xB, 0xC, 0xD, 0xE


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run long reproductions")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running reproduction, needs --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def three_node_map():
    """A: segments 0 and 2 (1.5), C: segment 1, B: segment 3 (0.7)."""
    return ClusterMap.from_segments([(0, 1.0, A), (1, 1.0, C), (2, 0.5, A), (3, 0.7, B)], unit=1.0)


@pytest.fixture
def holed_map():
    """Segments 0-2 unassigned; C, D, E on segments 3, 4 and 5."""
    return ClusterMap.from_segments([(3, 0.8, C), (4, 1.0, D), (5, 0.5, E)], unit=1.0)
