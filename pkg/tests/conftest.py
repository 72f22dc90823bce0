import re
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

# (criterion number, passed, detail) lines filled in by test_acceptance
ACCEPTANCE_LINES = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    match = re.match(r"test_criterion_(\d+)", item.name)
    if match and report.when == "call" and report.failed:
        number = int(match[1])
        if not any(n == number for n, _, _ in ACCEPTANCE_LINES):
            error = call.excinfo.exconly().splitlines()[0] if call.excinfo else "failed"
            ACCEPTANCE_LINES.append((number, False, f"error: {error}"))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number, passed, detail in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")
