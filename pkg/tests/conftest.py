import numpy as np
import pytest

from wkp.spectral import make_grid


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def grid1d():
    return make_grid(1, 32.0, 256)


@pytest.fixture
def grid2d():
    return make_grid(2, 16.0, 64)


def pytest_terminal_summary(terminalreporter):
    module = __import__("sys").modules.get("test_acceptance")
    lines = getattr(module, "CRITERION_LINES", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
