import pytest

ACCEPTANCE: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def criterion(request):
    """Record one acceptance criterion's outcome and a short detail line."""
    name = request.node.name

    def record(ok: bool, detail: str) -> bool:
        ACCEPTANCE[name] = (bool(ok), detail)
        return bool(ok)

    yield record
    if name not in ACCEPTANCE:
        ACCEPTANCE[name] = (False, "did not complete")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, (ok, detail) in sorted(ACCEPTANCE.items()):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
