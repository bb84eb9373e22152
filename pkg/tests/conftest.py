import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from spindimer.dimer import DimerCouplings
from spindimer.engine import SectorParams

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def special():
    """gxx = gyy = c, gxy = gyx = c/2 with c = 1 and a nonzero gzz."""
    return DimerCouplings.special(1.0, gzz=0.3)


@pytest.fixture
def special_real():
    return DimerCouplings.special_real(1.0, gzz=0.3)


@pytest.fixture
def unit():
    return SectorParams(1.0)


def random_state(rng, n=4):
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return v / np.linalg.norm(v)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.REPORT:
        terminalreporter.section("acceptance criteria")
        for line in mod.REPORT:
            terminalreporter.write_line(line)
