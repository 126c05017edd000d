import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from kleinjac import analyze, validate_curve  # noqa: E402
from kleinjac.curves import SHIPPED  # noqa: E402

CURVE_IDS = list(SHIPPED)


def curve_by_name(name):
    return validate_curve(SHIPPED[name].split(","))


@pytest.fixture(scope="session")
def g1():
    return curve_by_name("g1")


@pytest.fixture(scope="session")
def g2():
    return curve_by_name("g2")


@pytest.fixture(scope="session")
def g3():
    return curve_by_name("g3")


@pytest.fixture(scope="session", params=CURVE_IDS)
def shipped(request):
    """Each shipped curve with its pipeline analysis."""
    c = curve_by_name(request.param)
    return c, analyze(c)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
