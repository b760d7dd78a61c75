import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from wabid.cli import DEFAULT_GRID  # noqa: E402
from wabid.wab import Params  # noqa: E402

GRID = [Params(a, b) for a, b in DEFAULT_GRID]

# criterion number -> (passed, detail); filled by test_acceptance
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
