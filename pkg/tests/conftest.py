import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

_acceptance = {}


def pytest_runtest_logreport(report):
    # collect acceptance outcomes so the summary shows one line per criterion
    if report.when != "call" or "test_acceptance.py" not in report.nodeid:
        return
    _acceptance[report.nodeid.split("::")[-1]] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_acceptance):
        status = "PASS" if _acceptance[name] == "passed" else "FAIL"
        terminalreporter.write_line(f"{status}: {name}")
