"""Shared fixtures and the acceptance-criteria summary hook."""

import pytest

# (criterion, passed, detail) tuples appended by tests/test_acceptance.py.
ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


@pytest.fixture(scope="session")
def acceptance_log():
    """Sink for acceptance-criterion results, echoed after the run."""

    def record(criterion: str, passed: bool, detail: str) -> None:
        ACCEPTANCE_RESULTS.append((criterion, passed, detail))

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, passed, detail in ACCEPTANCE_RESULTS:
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"{status} {criterion}: {detail}")
