import pytest

from stableperm import PreferenceSystem

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Record one pass/fail line for an acceptance criterion; the lines are
    echoed in the terminal summary."""

    def _record(line: str) -> None:
        ACCEPTANCE_LINES.append(line)
        print(line)

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def cyclic3() -> PreferenceSystem:
    """Every first proposal is held; the canonical result is the 3-cycle."""
    return PreferenceSystem({1: [2, 3], 2: [3, 1], 3: [1, 2]})


@pytest.fixture
def pariah3() -> PreferenceSystem:
    """Agents 1 and 2 pair up; agent 3 is rejected by both."""
    return PreferenceSystem({1: [2, 3], 2: [1, 3], 3: [1, 2]})


@pytest.fixture
def mutual4() -> PreferenceSystem:
    """Two mutual first-choice pairs."""
    return PreferenceSystem({1: [2, 3, 4], 2: [1, 3, 4], 3: [4, 1, 2], 4: [3, 1, 2]})


@pytest.fixture
def mutual2() -> PreferenceSystem:
    return PreferenceSystem({1: [2], 2: [1]})
