from pathlib import Path

import numpy as np
import pytest

from hopfore.builtins import builtin

PRESENTATIONS = Path(__file__).resolve().parent.parent / "assets" / "presentations"

# every builtin covered by the acceptance runs
ALL_BUILTINS = [
    "heisenberg",
    "solv2-der",
    "solv2-auto",
    "usl2",
    "A(0,0,0)",
    "A(0,0,1)",
    "A(1,1,1)",
    "A(1,1,0)",
    "B(0)",
    "B(1)",
    "B(1/2)",
]


@pytest.fixture
def np_random():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def heisenberg():
    return builtin("heisenberg")


@pytest.fixture(scope="session")
def usl2():
    return builtin("usl2")


@pytest.fixture(scope="session")
def solv2_der():
    return builtin("solv2-der")


@pytest.fixture(scope="session")
def solv2_auto():
    return builtin("solv2-auto")


@pytest.fixture(scope="session")
def b1():
    return builtin("B(1)")


@pytest.fixture(scope="session")
def a001():
    return builtin("A(0,0,1)")
