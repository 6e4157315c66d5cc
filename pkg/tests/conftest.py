import pathlib

import pytest

FIXTURES = pathlib.Path(__file__).parent / "fixtures"

# Pass/fail lines recorded by the acceptance suite, replayed after the run.
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def fixtures() -> pathlib.Path:
    return FIXTURES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
