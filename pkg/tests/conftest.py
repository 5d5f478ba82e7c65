import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_ACCEPTANCE: dict[int, list[tuple[str, bool]]] = {}


@pytest.fixture
def criterion():
    """Record the outcome of one acceptance check under its criterion number."""

    def record(number: int, label: str, ok: bool) -> bool:
        _ACCEPTANCE.setdefault(number, []).append((label, bool(ok)))
        print(f"criterion {number:2d} {'PASS' if ok else 'FAIL'}: {label}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        entries = _ACCEPTANCE[number]
        ok = all(v for _, v in entries)
        failed = [label for label, v in entries if not v]
        line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}"
        if failed:
            line += "  (" + "; ".join(failed) + ")"
        terminalreporter.write_line(line)
