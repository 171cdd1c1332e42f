import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

_CRITERIA = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    name = report.nodeid.rsplit("::", 1)[-1]
    if "test_acceptance.py" in report.nodeid and name.startswith("test_criterion_"):
        num = int(name.split("_")[2])
        status, _, secs = _CRITERIA.get(num, ("PASS", "", 0.0))
        if not report.passed:
            status = "FAIL"
        _CRITERIA[num] = (status, name.split("[")[0], secs + report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        status, name, secs = _CRITERIA[num]
        terminalreporter.write_line(f"criterion {num:2d}: {status}  {name}  ({secs:.1f} s)")
