import pytest

from helpers import ACCEPTANCE_LINES, three_node_env, three_node_graph


@pytest.fixture
def fixture_graph():
    return three_node_graph()


@pytest.fixture
def half_half_env():
    return three_node_env({1: 0.5, 2: 0.5})


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
