import math

import numpy as np
import pytest

from casimir_cavity import AtomSpec, Boundary, CavitySpec

LAM = 1e-4


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def cav_d():
    return CavitySpec(1.0, Boundary.DIRICHLET)


@pytest.fixture
def cav_n():
    return CavitySpec(1.0, Boundary.NEUMANN)


def atom(x=0.3, Om=2 * math.pi, lam=LAM, a0=0.0):
    return AtomSpec(x, Om, lam, a0)
