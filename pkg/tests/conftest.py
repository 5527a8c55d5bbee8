import pytest

from multapprox import fixedpoint as fp


@pytest.fixture
def golden():
    return fp.golden()


@pytest.fixture
def sqrt2():
    return fp.from_sqrt(2)


@pytest.fixture
def sqrt3():
    return fp.from_sqrt(3)


_CRITERIA: dict = {}


@pytest.fixture
def criterion():
    """Record one acceptance line; the test still asserts on ``ok``."""
    def record(cid: int, ok: bool, detail: str):
        _CRITERIA[cid] = (ok, detail)
        print(f"{'PASS' if ok else 'FAIL'} criterion {cid}: {detail}")
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(_CRITERIA):
        ok, detail = _CRITERIA[cid]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {cid}: {detail}")
