import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from insetedge.tree import parse_tree  # noqa: E402


@pytest.fixture
def p4():
    return parse_tree("1 2\n2 3\n3 4")


@pytest.fixture
def p5():
    return parse_tree("1 2\n2 3\n3 4\n4 5")


@pytest.fixture
def star3():
    return parse_tree("1 2\n1 3\n1 4")


@pytest.fixture
def p2():
    return parse_tree("1 2")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    setattr(item, "rep_" + rep.when, rep)


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for name in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(test_acceptance.RESULTS[name])
