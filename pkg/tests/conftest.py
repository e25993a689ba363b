import pytest

from flp.corpus import load
from flp.syntax import parse_expr


@pytest.fixture(scope="session")
def coin():
    return load("coin.flp")


@pytest.fixture(scope="session")
def toy():
    return load("toy_tests.flp")


@pytest.fixture(scope="session")
def number():
    return load("number.flp")


@pytest.fixture(scope="session")
def grammar():
    return load("grammar.flp")


@pytest.fixture
def ex():
    """Parse an expression (variables, lets and _|_ allowed) against a program."""
    def parse(text, program):
        return parse_expr(text, program, allow_vars=True, allow_bottom=True)
    return parse


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS, format_result
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, (ok, detail) in RESULTS.items():
        terminalreporter.write_line(format_result(name, ok, detail))
