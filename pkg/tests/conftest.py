"""Shared test plumbing.

test_acceptance.py records one line per criterion in ACCEPTANCE_LINES;
the hook below prints them as a block at the end of the run so the
verdicts are visible in one place regardless of -v noise.
"""

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
