import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from collective.scenario import load_scenario  # noqa: E402

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture
def ring6():
    return load_scenario("ring6_clock.json")


@pytest.fixture
def ring6_trace(ring6):
    return ring6.run(6)


_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(tag, title): acceptance criterion reported in the summary")


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None or call.when == "teardown":
        return
    tag, title = mark.args
    ok = call.excinfo is None
    prev = _criteria.get(tag, (title, True))
    _criteria[tag] = (title, prev[1] and ok)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for tag in sorted(_criteria, key=lambda t: int(t[1:])):
        title, ok = _criteria[tag]
        terminalreporter.write_line("%-4s %-4s %s" % (tag, "PASS" if ok else "FAIL", title))
