"""Collects acceptance verdicts and prints them once at the end of the session."""
import pytest

VERDICTS = {}


@pytest.fixture
def verdict():
    def record(number, title, ok, detail=""):
        VERDICTS[number] = (title, bool(ok), detail)
        print(f"criterion {number} {title}: {'PASS' if ok else 'FAIL'} {detail}")
        return bool(ok)
    return record


def pytest_terminal_summary(terminalreporter):
    if not VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(VERDICTS):
        title, ok, detail = VERDICTS[number]
        terminalreporter.write_line(
            f"criterion {number} {title}: {'PASS' if ok else 'FAIL'}  {detail}")
