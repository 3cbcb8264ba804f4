import math

import pytest

from anharmonic.models import EnergyScanConfig, TruncationConfig
from anharmonic.potential import HarmonicPotential, QuarticPotential, SexticPotential, qes_potential

QES_S = (2.0 + math.sqrt(3.0)) / 4.0


@pytest.fixture
def pure_quartic():
    return QuarticPotential(a4=1.0, a2=0.0)


@pytest.fixture
def double_well():
    """r^4 - r^2, first row below zero of the double-well table."""
    return QuarticPotential(a4=1.0, a2=-1.0)


@pytest.fixture
def harmonic():
    return HarmonicPotential(a2=1.0)


@pytest.fixture
def pure_sextic():
    return SexticPotential(a6=1.0)


@pytest.fixture
def qes():
    """QES sextic at s = (2 + sqrt3)/4 for a given J."""
    def build(J: float) -> SexticPotential:
        return qes_potential(QES_S, J)
    return build


@pytest.fixture
def trunc():
    return TruncationConfig()


@pytest.fixture
def scan_config(trunc):
    def build(e_min: float, e_max: float, **kwargs) -> EnergyScanConfig:
        return EnergyScanConfig(e_min=e_min, e_max=e_max, truncation=trunc, **kwargs)
    return build
