import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import acceptance_log  # noqa: E402


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when == "call":
        item.call_report = report


@pytest.fixture
def detail(request):
    """Dict of notes for the acceptance line; the outcome is recorded after the test."""
    notes = {}
    yield notes
    marker = request.node.get_closest_marker("criterion")
    report = getattr(request.node, "call_report", None)
    if marker is None or report is None:
        return
    number, title = marker.args
    parts = list(notes.values())
    if report.failed:
        message = str(report.longrepr.reprcrash.message) if hasattr(report.longrepr, "reprcrash") else ""
        parts.append(message.splitlines()[0] if message else "failed")
    acceptance_log.record(number, title, report.passed, "; ".join(parts))


def pytest_terminal_summary(terminalreporter):
    if acceptance_log.LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(acceptance_log.LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
