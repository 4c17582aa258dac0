import numpy as np
import pytest

from hillres.hill import apply_gauge, band_edges
from hillres.potentials import CompactPotential, PeriodicPotential


@pytest.fixture(scope="session")
def p_zero():
    return apply_gauge(PeriodicPotential(0.0, (), ()))


@pytest.fixture(scope="session")
def bands_zero(p_zero):
    return band_edges(p_zero, 8)


@pytest.fixture(scope="session")
def q_well():
    return CompactPotential.constant(-4.0, 1.0)


@pytest.fixture(scope="session")
def p_mathieu():
    return apply_gauge(PeriodicPotential(0.0, (2.0,), ()))


@pytest.fixture(scope="session")
def bands_mathieu(p_mathieu):
    return band_edges(p_mathieu, 8)


@pytest.fixture(scope="session")
def q_bump():
    return CompactPotential.bump(-6.0, 1.0)


@pytest.fixture(scope="session")
def p_generic():
    # non-even background with several harmonics; gaps 1..8 all open
    return apply_gauge(
        PeriodicPotential(0.0, (1.8, -0.9, 0.5), (1.1, 0.7, -0.4))
    )


@pytest.fixture(scope="session")
def bands_generic(p_generic):
    return band_edges(p_generic, 8)


def rng(seed=0):
    return np.random.default_rng(seed)
