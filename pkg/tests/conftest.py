"""Shared pytest plumbing.

Collects the outcome of every ``test_criterion_*`` test and prints one
PASS/FAIL line per criterion in the terminal summary, so the acceptance
status is visible even when output capture is on.
"""

import pytest

_criteria: dict[str, bool] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when == "call" and item.name.startswith("test_criterion_"):
        _criteria[item.name] = report.passed


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_criteria):
        label = name.replace("test_", "").replace("_", " ")
        verdict = "PASS" if _criteria[name] else "FAIL"
        terminalreporter.write_line(f"{label}: {verdict}")
