import pytest
from hypothesis import HealthCheck, settings

from laguerre_pf import PrecisionContext, Potential, solve_equilibrium

settings.register_profile(
    "default", deadline=None, max_examples=25, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

QUADRATIC = Potential((0, "0.1"))


@pytest.fixture(scope="session")
def ctx():
    return PrecisionContext(40)


@pytest.fixture(scope="session")
def eq0(ctx):
    return solve_equilibrium(Potential(), ctx)


@pytest.fixture(scope="session")
def eq_quad(ctx):
    return solve_equilibrium(QUADRATIC, ctx)
