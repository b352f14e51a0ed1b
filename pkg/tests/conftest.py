"""Collects the outcome of every acceptance criterion and prints one line each."""
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_CRITERIA = {}


def pytest_collection_modifyitems(items):
    for item in items:
        marker = item.get_closest_marker("acceptance")
        if marker:
            number, title = marker.args
            _CRITERIA.setdefault(number, {"title": title, "passed": 0, "failed": 0, "skipped": 0})


@pytest.hookimpl(trylast=True)
def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.failed or report.skipped):
        return
    marker = next((m for m in _markers.get(report.nodeid, [])), None)
    if marker is None:
        return
    entry = _CRITERIA[marker]
    if report.failed:
        entry["failed"] += 1
    elif report.skipped:
        entry["skipped"] += 1
    elif report.when == "call":
        entry["passed"] += 1


_markers = {}


def pytest_itemcollected(item):
    marker = item.get_closest_marker("acceptance")
    if marker:
        _markers[item.nodeid] = [marker.args[0]]


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        entry = _CRITERIA[number]
        ran = entry["passed"] + entry["failed"]
        if ran == 0:
            status = "NOT RUN"
        else:
            status = "PASS" if entry["failed"] == 0 else "FAIL"
        terminalreporter.write_line(f"AC{number:<3d}{status:<8s}{entry['title']}")
