import pytest

VERDICTS: dict[int, tuple[str, bool, str]] = {}


@pytest.fixture
def verdict():
    """Record one acceptance line: verdict(number, title, [(label, ok), ...])."""

    def record(number: int, title: str, items: list[tuple[str, bool]]) -> None:
        ok = all(passed for _, passed in items)
        failed = [label for label, passed in items if not passed]
        detail = "; ".join(label for label, _ in items) if ok else "failed: " + "; ".join(failed)
        VERDICTS[number] = (title, ok, detail)
        assert ok, f"criterion {number} ({title}) {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if not VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(VERDICTS):
        title, ok, detail = VERDICTS[n]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {n:>2}. {title}: {detail}")
