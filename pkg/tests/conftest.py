import pytest

from benney_cli.core.linearization import assemble_jh, eigen_spectrum_jh
from benney_cli.core.waves import make_dnoidal, make_snoidal

GRID_SIZE = 256


@pytest.fixture(scope="session")
def dnoidal_wave():
    """c = 1, beta = 0, sigma = 1, kappa = 0.5."""
    return make_dnoidal(1.0, 0.0, 1.0, 0.0, 0.5, GRID_SIZE)


@pytest.fixture(scope="session")
def snoidal_wave():
    """c = 1, beta = 2, sigma = -1, kappa = 0.5."""
    return make_snoidal(1.0, 2.0, -1.0, 0.0, 0.5, GRID_SIZE)


@pytest.fixture(scope="session")
def unstable_snoidal_wave():
    """c = 1, beta = 1.01, sigma = -1, kappa = 0.5: det D > 0, so an odd index count."""
    return make_snoidal(1.0, 1.01, -1.0, 0.0, 0.5, GRID_SIZE)


@pytest.fixture(scope="session")
def dnoidal_jh(dnoidal_wave):
    return assemble_jh(dnoidal_wave)


@pytest.fixture(scope="session")
def dnoidal_eigen(dnoidal_jh):
    return eigen_spectrum_jh(dnoidal_jh)


@pytest.fixture(scope="session")
def unstable_snoidal_jh(unstable_snoidal_wave):
    return assemble_jh(unstable_snoidal_wave)


@pytest.fixture(scope="session")
def unstable_snoidal_eigen(unstable_snoidal_jh):
    return eigen_spectrum_jh(unstable_snoidal_jh)


@pytest.fixture(scope="session")
def snoidal_jh(snoidal_wave):
    return assemble_jh(snoidal_wave)


@pytest.fixture(scope="session")
def snoidal_eigen(snoidal_jh):
    return eigen_spectrum_jh(snoidal_jh)
