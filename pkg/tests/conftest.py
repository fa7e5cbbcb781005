import numpy as np
import pytest

from blevans import LayerParams


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def inflow_point():
    return LayerParams.create(5.0 / 3.0, 1e-2, 0.5, "inflow")


@pytest.fixture
def outflow_point():
    return LayerParams.create(5.0 / 3.0, 1e-2, 0.6, "outflow")


ACCEPTANCE = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[ACCEPTANCE] = {}


@pytest.fixture
def acceptance(request):
    """Record one ``criterion N: PASS|FAIL ...`` line for the run summary."""
    lines = request.config.stash[ACCEPTANCE]

    def record(number: int, passed: bool, detail: str) -> None:
        lines[number] = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}"

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE, {})
    if lines:
        terminalreporter.section("acceptance criteria")
        for k in sorted(lines):
            terminalreporter.write_line(lines[k])
