import numpy as np
import pytest

from spinpoly import Axis


@pytest.fixture
def rng():
    return np.random.default_rng(20240517)


def random_axis(rng) -> Axis:
    return Axis.normalized(rng.normal(size=3))


# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[number])
