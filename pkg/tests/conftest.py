import functools

import pytest

from qfourier import QContext, find_zeros

ACCEPTANCE_LINES = []


@functools.lru_cache(maxsize=None)
def zero_table(q, K, series_tol=1e-30):
    """Zero tables are the expensive shared input; compute each once per session."""
    return find_zeros(QContext(q, series_tol=series_tol), K)


@pytest.fixture(scope="session")
def ctx05():
    return QContext(0.5)


@pytest.fixture(scope="session")
def zt05():
    return zero_table(0.5, 60)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
