import pytest

_CRITERIA = []


@pytest.fixture
def criterion(request):
    """Record a pass/fail line for the acceptance summary.

    Usage: ``criterion("7a", "p0 outside", ok, detail)`` then assert ``ok``.
    """
    def record(key, title, ok, detail=""):
        _CRITERIA.append((key, title, bool(ok), detail))
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for key, title, ok, detail in _CRITERIA:
        mark = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"[{mark}] {key:>4} {title}  {detail}")
