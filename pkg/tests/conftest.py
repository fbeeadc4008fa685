"""Shared test plumbing: the acceptance suite registers one summary line per
criterion here; the terminal hook prints them even under output capture."""

from contextlib import contextmanager

_CRITERION_LINES: dict[int, str] = {}


def record_criterion(number: int, passed: bool, detail: str) -> None:
    status = "PASS" if passed else "FAIL"
    _CRITERION_LINES[number] = f"CRITERION {number}: {status} [{detail}]"


@contextmanager
def criterion(number: int, detail: str):
    """Record the outcome of an acceptance criterion block."""
    try:
        yield
    except BaseException:
        record_criterion(number, False, detail)
        raise
    record_criterion(number, True, detail)
    print(_CRITERION_LINES[number])


def pytest_terminal_summary(terminalreporter):
    if _CRITERION_LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(_CRITERION_LINES):
            terminalreporter.write_line(_CRITERION_LINES[number])
