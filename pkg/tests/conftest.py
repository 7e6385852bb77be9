import pytest

# criterion lines recorded by test_acceptance, printed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria (seed 42)")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
