import warnings

import pytest

from ioncollide.units import clear_user_species


@pytest.fixture(autouse=True)
def _fresh_registry():
    yield
    clear_user_species()


@pytest.fixture
def quiet():
    """Silence regime warnings for tests that deliberately use unphysical traps."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        yield


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
