"""Shared fixtures: the acceptance-verdict registry.

Acceptance tests append one [PASS]/[FAIL] line each; the terminal-summary
hook prints them after capture ends, so the verdicts are visible in plain
`pytest -v` output and in teed logs.
"""

import pytest

VERDICTS: list[str] = []


@pytest.fixture(scope="session")
def verdicts():
    return VERDICTS


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if VERDICTS:
        terminalreporter.section("acceptance verdicts")
        for line in VERDICTS:
            terminalreporter.write_line(line)
