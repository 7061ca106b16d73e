import numpy as np
import pytest

from annihilator import groups, rng as rngmod

SMALL_GROUPS = ["2", "3", "4", "5", "6", "7", "8", "2x2", "2x3", "2x4", "3x3"]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def crandn(r, *shape):
    return rngmod.complex_gaussian(r, *shape)


def spec_of(text):
    return groups.GroupSpec.parse(text)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[number])
