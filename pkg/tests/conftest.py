import pytest

_ACCEPTANCE = []


@pytest.fixture
def verdict():
    """Record one acceptance line, then assert it."""

    def record(number, name, ok, detail=""):
        _ACCEPTANCE.append((number, name, bool(ok), detail))
        print(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {name} | {detail}")
        assert ok, f"criterion {number} ({name}) failed: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, name, ok, detail in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {number}. {name}: {detail}")
