from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from corpus import CORPUS  # noqa: E402


@pytest.fixture(scope="session")
def corpus():
    return CORPUS


# ---------------------------------------------------------------------------
# acceptance report: one line per criterion, printed after the run

_ACCEPTANCE: list[str] = []


@pytest.fixture
def record():
    def add(criterion: str, ok: bool, detail: str) -> None:
        _ACCEPTANCE.append(f"criterion {criterion}: {'PASS' if ok else 'FAIL'} - {detail}")

    return add


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
