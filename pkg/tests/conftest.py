import pytest

ACCEPTANCE = {}


@pytest.fixture
def record():
    """Store (ok, detail) for an acceptance criterion; printed in the terminal summary."""

    def _record(num, ok, detail):
        ACCEPTANCE[num] = (bool(ok), detail)
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"ACCEPTANCE {num:>2} {'PASS' if ok else 'FAIL'}: {detail}")
