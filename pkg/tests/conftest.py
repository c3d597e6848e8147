"""Shared fixtures: the golden three-variable network and its parse."""

from pathlib import Path

import pytest

from posskc.network import parse_network

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "fixtures"

ACCEPTANCE_LINES: list[str] = []
"""Verdict lines recorded by test_acceptance, echoed after the run."""


@pytest.fixture(scope="session")
def alarm_text() -> str:
    return (FIXTURE_DIR / "alarm.pnet").read_text()


@pytest.fixture(scope="session")
def alarm(alarm_text):
    return parse_network(alarm_text)


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
