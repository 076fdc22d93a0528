import pytest
from hypothesis import HealthCheck, settings

from pfcert.cli import load_family
from pfcert.forms import JacobianData, picard_fuchs_full

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

LEGENDRE_POLY = "x1^2*x2 - x0*(x0 - x2)*(x0 - t*x2)"
QUARTIC_POLY = "x0^4 + x1^4 + x2^4 + x3^4 - t*x0*x1*x2*x3"


@pytest.fixture(scope="session")
def legendre():
    return load_family("legendre")


@pytest.fixture(scope="session")
def quartic():
    return load_family("mirror_quartic")


@pytest.fixture(scope="session")
def legendre_pf(legendre):
    return picard_fuchs_full(legendre)


@pytest.fixture(scope="session")
def quartic_jd(quartic):
    return JacobianData(quartic)


@pytest.fixture(scope="session")
def quartic_pf(quartic, quartic_jd):
    return picard_fuchs_full(quartic, jd=quartic_jd)
