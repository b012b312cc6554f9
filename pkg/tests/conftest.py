import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

from acceptance_log import RESULTS  # noqa: E402


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for status, name, detail in RESULTS:
        terminalreporter.write_line(f"{status} {name}" + (f" -- {detail}" if detail else ""))
