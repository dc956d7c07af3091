import sys

import numpy as np
import pytest

from polswitch.netcore import FrequencyGrid, NetworkBlock
from polswitch.netlist import default_netlist
from polswitch.system import run_all

F0 = 2.45e9


@pytest.fixture(scope="session")
def realized_results():
    return run_all(default_netlist("realized"))


@pytest.fixture(scope="session")
def ideal_results():
    return run_all(default_netlist("ideal"))


@pytest.fixture
def band_grid():
    return FrequencyGrid.from_range(2.0e9, 3.0e9, 10e6)


def random_passive(rng, grid, n=2, scale=0.9):
    """Random reciprocal block with spectral norm ``scale`` at every point."""
    m = rng.normal(size=(len(grid), n, n)) + 1j * rng.normal(size=(len(grid), n, n))
    m = m + np.swapaxes(m, 1, 2)
    norm = np.linalg.norm(m, ord=2, axis=(1, 2))
    return NetworkBlock(grid, scale * m / norm[:, None, None], "random")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(lines):
        terminalreporter.write_line(lines[cid])
