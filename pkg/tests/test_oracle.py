import math

import pytest

from anharmonic.exceptions import OracleCutoffError
from anharmonic.models import Boundary, EnergyScanConfig, Family, OracleConfig
from anharmonic.oracle import count_nodes, default_r_max, oracle_eigenvalues
from anharmonic.potential import HarmonicPotential, QuarticPotential, SexticPotential, indicial_exponents, qes_potential
from anharmonic.solver import default_window, lowest_levels

FAST = OracleConfig(grid_points=5000)
QES_S = (2.0 + math.sqrt(3.0)) / 4.0


@pytest.mark.parametrize(
    "boundary, expected",
    [
        (Boundary.EVEN_1D, [1.0, 5.0, 9.0]),
        (Boundary.ODD_1D, [3.0, 7.0, 11.0]),
        (Boundary.DIRICHLET_ORIGIN, [3.0, 7.0, 11.0]),
    ],
)
def test_harmonic_levels(harmonic, boundary, expected):
    assert oracle_eigenvalues(harmonic, boundary, 3, FAST) == pytest.approx(expected, abs=1e-6)


def test_centrifugal_harmonic_levels():
    # am2 = l(l+1) with l = 1 shifts every level by 2
    pot = HarmonicPotential(a2=1.0, am2=2.0)
    levels = oracle_eigenvalues(pot, Boundary.DIRICHLET_ORIGIN, 2, FAST)
    assert levels == pytest.approx([5.0, 9.0], abs=1e-6)


def test_count_nodes(harmonic):
    assert count_nodes(harmonic, Boundary.EVEN_1D, 0.5, FAST) == 0
    assert count_nodes(harmonic, Boundary.EVEN_1D, 6.0, FAST) == 2
    assert count_nodes(harmonic, Boundary.ODD_1D, 6.0, FAST) == 1
    assert count_nodes(harmonic, Boundary.DIRICHLET_ORIGIN, 7.5, FAST) == 2


def test_parity_states_need_a_plain_polynomial():
    with pytest.raises(ValueError):
        oracle_eigenvalues(QuarticPotential(a4=1.0, am2=0.5), Boundary.EVEN_1D, 1, FAST)


def test_short_domain_is_rejected(harmonic):
    config = OracleConfig(grid_points=2000, r_max=2.0, max_extensions=0)
    with pytest.raises(OracleCutoffError):
        oracle_eigenvalues(harmonic, Boundary.EVEN_1D, 2, config)


def test_count_must_be_positive(harmonic):
    with pytest.raises(ValueError):
        oracle_eigenvalues(harmonic, Boundary.EVEN_1D, 0, FAST)


def test_default_r_max(pure_quartic, pure_sextic):
    assert default_r_max(pure_quartic) == 6.0
    assert default_r_max(pure_sextic) == 4.0


@pytest.mark.slow
@pytest.mark.parametrize(
    "boundary, expected",
    [
        (Boundary.EVEN_1D, [1.06036209, 7.45569794]),
        (Boundary.ODD_1D, [3.79967303, 11.64474551]),
    ],
)
def test_pure_quartic_levels(pure_quartic, boundary, expected):
    assert oracle_eigenvalues(pure_quartic, boundary, 2) == pytest.approx(expected, abs=1e-7)


@pytest.mark.slow
@pytest.mark.parametrize(
    "boundary, expected",
    [
        (Boundary.EVEN_1D, [1.0, 5.0, 9.0, 13.0]),
        (Boundary.DIRICHLET_ORIGIN, [3.0, 7.0, 11.0, 15.0]),
    ],
)
def test_harmonic_levels_default_grid(harmonic, boundary, expected):
    assert oracle_eigenvalues(harmonic, boundary, 4) == pytest.approx(expected, abs=1e-8)


@pytest.mark.parametrize(
    "boundary, expected",
    [
        (Boundary.EVEN_1D, 1.06036209),
        (Boundary.ODD_1D, 3.79967303),
    ],
)
def test_grid_halving(pure_quartic, boundary, expected):
    levels = [
        oracle_eigenvalues(pure_quartic, boundary, 1, OracleConfig(grid_points=n, energy_tolerance=1e-13))[0]
        for n in (250, 500, 1000)
    ]
    coarse_step, fine_step = abs(levels[1] - levels[0]), abs(levels[2] - levels[1])
    # Numerov is fourth order: halving the spacing cuts the error about sixteenfold
    assert fine_step < coarse_step / 8
    extrapolated = levels[2] + (levels[2] - levels[1]) / 15.0
    assert extrapolated == pytest.approx(expected, abs=1e-7)
    assert abs(extrapolated - expected) < abs(levels[2] - expected) + 5e-9


@pytest.mark.parametrize(
    "boundary, levels",
    [
        (Boundary.EVEN_1D, [-3.41014276, 0.63891956]),
        (Boundary.ODD_1D, [-3.25067536, 2.58121627]),
    ],
)
def test_nodes_count_the_levels_below(boundary, levels):
    pot = QuarticPotential(a4=1.0, a2=-5.0)
    for k, E in enumerate(levels):
        assert count_nodes(pot, boundary, E - 1e-3, FAST) == k
        assert count_nodes(pot, boundary, E + 1e-3, FAST) == k + 1


def _wronskian_levels(pot, count):
    nu = indicial_exponents(pot.am2).nu_regular
    e_min, e_max = default_window(pot)
    config = EnergyScanConfig(e_min=e_min, e_max=e_max)
    return [r.energy for r in lowest_levels(Family.SEXTIC, pot, nu, count, config)]


@pytest.mark.slow
@pytest.mark.parametrize(
    "pot",
    [
        qes_potential(QES_S, -math.sqrt(3.0) / 4.0),
        qes_potential(QES_S, 1.5),
        SexticPotential(a6=1.0, a4=-1.0, a2=0.5),
        SexticPotential(a6=2.0, a2=-1.0, am2=0.75),
        SexticPotential(a6=0.5, a4=1.0, a2=-2.0, am2=2.0),
    ],
)
def test_sextic_levels_match_the_wronskian(pot):
    expected = _wronskian_levels(pot, 2)
    assert oracle_eigenvalues(pot, Boundary.DIRICHLET_ORIGIN, 2) == pytest.approx(expected, abs=1e-6)
