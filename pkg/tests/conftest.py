import os

import pytest

ACCEPTANCE = {}  # criterion number -> (passed, title, detail)


def record(num, title, passed, detail=""):
    ACCEPTANCE[num] = (bool(passed), title, detail)
    print(f"{'PASS' if passed else 'FAIL'} criterion {num}: {title} -- {detail}")
    return bool(passed)


@pytest.fixture
def criterion():
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, title, detail = ACCEPTANCE[num]
        tr.write_line(f"{'PASS' if ok else 'FAIL'}  {num:2d}. {title}: {detail}")
    jit = "numpy fallback" if os.environ.get("FORGE_DISABLE_JIT") == "1" else "numba where available"
    tr.write_line(f"(kernel path: {jit})")
