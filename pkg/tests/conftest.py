import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def accept():
    """Record one acceptance line; the test still asserts on its own."""

    def record(number, name, passed, detail=""):
        ACCEPTANCE_LINES.append((number, name, bool(passed), detail))
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number, name, passed, detail in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(
            f"[{number:>2}] {'PASS' if passed else 'FAIL'}  {name}  ({detail})"
        )
