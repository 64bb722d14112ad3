
import pytest

from painleve_forge import parse_expr
from painleve_forge.odefile import fixture_path, load_fixture

CHAZY_TEXT = "y''' - 2*y*y'' + 3*y'^2"


@pytest.fixture
def chazy():
    return parse_expr(CHAZY_TEXT)


@pytest.fixture
def fixture():
    """Path of a shipped .ode file by short name."""
    return lambda name: str(fixture_path(name))


@pytest.fixture
def equation():
    return lambda name: load_fixture(name).equation()


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(mod.RESULTS):
            terminalreporter.write_line(line)
