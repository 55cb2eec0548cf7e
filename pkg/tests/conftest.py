"""Shared pytest plumbing: collects acceptance-criterion results and prints
one pass/fail line per criterion in the terminal summary, so the outcome of
the full gate is readable at a glance even when every test passes."""

import pytest

_acceptance_lines: list[str] = []


@pytest.fixture
def acceptance_report():
    """Record one summary line for an acceptance criterion."""

    def report(criterion: str, ok: bool, elapsed: float, detail: str = "") -> None:
        status = "PASS" if ok else "FAIL"
        suffix = f" -- {detail}" if detail else ""
        _acceptance_lines.append(f"{status}  {criterion}  ({elapsed:.2f}s){suffix}")

    return report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in _acceptance_lines:
        terminalreporter.write_line(line)
