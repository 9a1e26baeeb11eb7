import mpmath
import pytest

from levyint import PrecisionCtx


@pytest.fixture(scope="session")
def ctx():
    return PrecisionCtx(digits=30)


@pytest.fixture(scope="session")
def ctx50():
    return PrecisionCtx(digits=50)


def oracle(dps):
    """A private mpmath context for reference values."""
    m = mpmath.mp.clone()
    m.dps = dps
    return m


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
