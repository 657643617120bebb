"""Session-scoped fixtures caching the expensive symbolic windows."""

import pytest

from somoseds.somos import extend, laurent_spec, poly_unit_spec, unit_spec

# one "CRITERION n: PASS/FAIL" line per acceptance criterion, emitted in the
# terminal summary so they survive output capture
ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    for line in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def poly4_window():
    """Symbolic unit-initial Somos-4 window wide enough for n=10, |l|<=2."""
    return extend(poly_unit_spec(4), -20, 40)


@pytest.fixture(scope="session")
def poly5_window():
    """Symbolic unit-initial Somos-5 window wide enough for n=10, |l|<=2."""
    return extend(poly_unit_spec(5), -18, 38)


@pytest.fixture(scope="session")
def laurent4_window():
    return extend(laurent_spec(4), 1, 20)


@pytest.fixture(scope="session")
def laurent5_window():
    return extend(laurent_spec(5), 1, 20)


@pytest.fixture(scope="session")
def int4_window():
    return extend(unit_spec(4), -50, 300)


@pytest.fixture(scope="session")
def int5_window():
    return extend(unit_spec(5), -50, 300)
