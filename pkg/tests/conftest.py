import math
import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from qisa import corpus
from qisa.lang import load_program
from qisa.state import JointState, RegisterDecl


@pytest.fixture
def bell():
    r = 1 / math.sqrt(2)
    regs = [RegisterDecl("A", 1), RegisterDecl("B", 1)]
    return JointState.from_amplitudes(regs, {(0, 1): r, (1, 0): r})


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def corpus_program():
    cache = {}

    def load(name):
        if name not in cache:
            cache[name] = load_program(corpus.path(name))
        return cache[name]

    return load


def pytest_terminal_summary(terminalreporter):
    from acceptance_report import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number])
