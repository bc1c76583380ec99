import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from _ledger import ACCEPTANCE  # noqa: E402


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
