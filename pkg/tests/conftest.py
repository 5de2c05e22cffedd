import numpy as np
import pytest

from cohloss import _backend

BACKENDS = _backend.available()


@pytest.fixture(params=BACKENDS)
def backend(request, monkeypatch):
    """Run the test once per importable kernel backend."""
    kernels = _backend.load(request.param)
    monkeypatch.setattr(_backend, "kernels", kernels)
    return kernels


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
