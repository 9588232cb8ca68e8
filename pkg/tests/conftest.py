import pytest

CRITERIA = {
    1: "worked example",
    2: "oracle equivalence",
    3: "dynamic correctness",
    4: "parsing invariants",
    5: "size bounds",
    6: "short-pattern speedup",
    7: "serialization round trip",
}


def pytest_configure(config):
    config._acceptance = {}


@pytest.fixture
def acceptance(request):
    """Record one PASS/FAIL line for an acceptance criterion."""
    log = request.config._acceptance

    def record(k: int, ok: bool, detail: str) -> bool:
        log[k] = (ok, detail)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    log = config._acceptance
    if not log:
        return
    terminalreporter.section("acceptance criteria")
    for k, name in CRITERIA.items():
        if k in log:
            ok, detail = log[k]
            status = "PASS" if ok else "FAIL"
        else:
            status, detail = "NOT RUN", "deselected, or raised before reporting"
        terminalreporter.write_line(f"criterion {k} ({name}): {status}  {detail}")
