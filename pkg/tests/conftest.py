import numpy as np
import pytest

from homsvm.dataset import paper_dataset, scaled_dataset
from homsvm.losses import LossContext

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def paper16():
    return paper_dataset()


@pytest.fixture(scope="session")
def paper4():
    return paper_dataset([])


@pytest.fixture(scope="session")
def ctx16(paper16):
    return LossContext(paper16)


@pytest.fixture(scope="session")
def ctx4(paper4):
    return LossContext(paper4)


@pytest.fixture(scope="session")
def scaled4(paper4):
    return scaled_dataset(paper4, 1, 20)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def _criterion_number(line):
    return int(line.split()[1].rstrip("]"))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=_criterion_number):
            terminalreporter.write_line(line)
