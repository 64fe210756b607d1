"""Shared fixtures: the acceptance-criteria reporter.

Acceptance tests record one line per criterion; the summary hook prints
them after the run so the verdicts are visible even when pytest captures
stdout.
"""

import pytest

RESULTS = []


@pytest.fixture
def criterion():
    def record(num: int, passed: bool, detail: str) -> None:
        RESULTS.append((num, passed, detail))

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num, passed, detail in sorted(RESULTS):
        tag = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{tag}] criterion {num}: {detail}")
