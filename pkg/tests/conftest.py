import pytest

from punctured.registry import builtin_curve


@pytest.fixture(scope="session")
def E():
    return builtin_curve("67a1")


@pytest.fixture(scope="session")
def J():
    return builtin_curve("8969.a.8969.1")


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
