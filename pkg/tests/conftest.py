import re
from pathlib import Path

import pytest

from fencenav.scene import ExplicitScene, Obstacle

DATA = Path(__file__).parent / "data"


@pytest.fixture
def data_dir() -> Path:
    return DATA


@pytest.fixture
def column() -> ExplicitScene:
    return ExplicitScene(100, [Obstacle(0, 50, -10, 51, 10)])


# acceptance outcomes, printed as one line per criterion at the end of the run
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def criterion():
    def record(num: int, ok: bool, detail: str) -> None:
        ACCEPTANCE[num] = (bool(ok), detail)
    return record


def pytest_terminal_summary(terminalreporter):
    ran = set()
    for key, reports in terminalreporter.stats.items():
        if key == "deselected":
            continue
        for r in reports:
            m = re.search(r"test_acceptance\.py::test_criterion_(\d+)", getattr(r, "nodeid", "") or "")
            if m:
                ran.add(int(m.group(1)))
    if not ran:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for num in sorted(ran):
        ok, detail = ACCEPTANCE.get(num, (False, "not recorded (the test errored)"))
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
