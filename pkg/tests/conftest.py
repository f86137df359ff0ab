import numpy as np
import pytest

from conedwu.algorithms import compute_bookkeeping
from conedwu.domain import Population


def bookkept(decisions, objectives, cone=None):
    pop = Population(np.asarray(decisions, float), np.asarray(objectives, float))
    compute_bookkeeping(pop, cone)
    return pop


@pytest.fixture
def make_pool():
    return bookkept


# acceptance verdicts, printed once at the end of the session
VERDICTS: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for key in sorted(VERDICTS):
            terminalreporter.write_line(VERDICTS[key])
