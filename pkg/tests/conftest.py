import numpy as np
import pytest

from catnoise.channel import DerivedParams, validate_channel

SEED = 20240917


def random_probs(rng, count):
    return rng.dirichlet(np.ones(4), size=count)


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


@pytest.fixture
def depol_09():
    """pi = (0.9, 1/30, 1/30, 1/30): a = 28/30, b = 2/30, c = 26/30, d = 0."""
    return validate_channel([0.9, 1 / 30, 1 / 30, 1 / 30])


def params(a, b, c, d):
    return DerivedParams(a=a, b=b, c=c, d=d)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
