import numpy as np
import pytest

from firelik.geometry import GridSpec

ACCEPTANCE_LINES = []


@pytest.fixture
def grid10():
    """101 x 101 nodes at 10 m spacing from the origin."""
    return GridSpec(101, 101, 10.0, 10.0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
