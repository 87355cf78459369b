"""Shared pytest plumbing.

The acceptance tests register one PASS/FAIL line each; emitting them from
the terminal-summary hook keeps them visible under output capture.
"""

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
