import math

import pytest
import sympy
from pydantic import ValidationError

from anharmonic.exceptions import ComplexIndicialError
from anharmonic.models import AsymptoticSolutionSpec, Boundary, Branch, Family, Sector
from anharmonic.potential import (
    HarmonicPotential,
    QuarticPotential,
    SexticPotential,
    asymptotic_exponents,
    indicial_exponents,
    qes_level_count,
    qes_potential,
    qes_termination_index,
    quartic_exponents,
    sector_boundary,
    sector_exponents,
    sextic_exponents,
)

SQRT3 = math.sqrt(3.0)


@pytest.mark.parametrize(
    "am2, regular, other, degenerate",
    [
        (0.0, 1.0, 0.0, False),
        (0.5, 1.3660254037844386, -0.3660254037844386, False),
        (-0.25, 0.5, 0.5, True),
        (2.0, 2.0, -1.0, False),
    ],
)
def test_indicial_exponents(am2, regular, other, degenerate):
    pair = indicial_exponents(am2)
    assert pair.nu_regular == pytest.approx(regular, abs=1e-14)
    assert pair.nu_other == pytest.approx(other, abs=1e-14)
    assert pair.degenerate is degenerate
    assert pair.nu_regular + pair.nu_other == pytest.approx(1.0)
    for nu in (pair.nu_regular, pair.nu_other):
        assert nu * (nu - 1.0) == pytest.approx(am2, abs=1e-14)


def test_complex_indicial_exponents_rejected():
    with pytest.raises(ComplexIndicialError):
        indicial_exponents(-1.0)


def test_quartic_exponents():
    rec = quartic_exponents(QuarticPotential(a4=1.0, a2=0.0), Branch.RECESSIVE)
    assert rec.alphas == (0.0, 0.0, -1.0)
    assert rec.mu == -1.0

    well = quartic_exponents(QuarticPotential(a4=1.0, a2=-5.0), Branch.RECESSIVE)
    assert well.alpha(1) == pytest.approx(2.5)
    assert well.alpha(2) == 0.0

    dom = quartic_exponents(QuarticPotential(a4=4.0, a2=2.0), Branch.DOMINANT)
    assert dom.leading == pytest.approx(2.0)
    assert dom.alpha(1) == pytest.approx(0.5)
    assert dom.mu == -1.0


def test_sextic_exponents():
    rec = sextic_exponents(SexticPotential(a6=1.0), Branch.RECESSIVE)
    assert rec.mu == pytest.approx(-1.5)
    assert rec.alpha(1) == 0.0 and rec.alpha(3) == 0.0

    pot = SexticPotential(a6=1.0, a4=0.0, a2=-6.0)
    rec = sextic_exponents(pot, Branch.RECESSIVE)
    dom = sextic_exponents(pot, Branch.DOMINANT)
    assert rec.mu == pytest.approx(1.5)
    assert dom.mu == pytest.approx(-4.5)
    assert rec.mu + dom.mu == pytest.approx(-3.0)
    assert rec.leading == -dom.leading


def test_sextic_exponents_with_quartic_term():
    pot = SexticPotential(a6=4.0, a4=2.0, a2=1.0)
    rec = sextic_exponents(pot, Branch.RECESSIVE)
    assert rec.alpha(4) == pytest.approx(-2.0)
    assert rec.alpha(2) == pytest.approx(-0.5)
    # -3/2 - (4*4*1 - 4)/(8*4*2)
    assert rec.mu == pytest.approx(-1.5 - 12.0 / 64.0)


def test_branch_sign_is_validated():
    with pytest.raises(ValidationError):
        AsymptoticSolutionSpec(family=Family.QUARTIC, alphas=(0.0, 0.0, 1.0), mu=-1.0, branch=Branch.RECESSIVE)
    with pytest.raises(ValidationError):
        AsymptoticSolutionSpec(family=Family.SEXTIC, alphas=(0.0, 0.0, -1.0), mu=-1.5, branch=Branch.RECESSIVE)


def test_harmonic_has_no_asymptotic_expansion():
    with pytest.raises(TypeError):
        asymptotic_exponents(HarmonicPotential(a2=1.0))


@pytest.mark.parametrize(
    "kwargs",
    [
        {"a4": 0.0},
        {"a4": -1.0},
        {"a4": 1.0, "am2": -0.3},
    ],
)
def test_invalid_quartic(kwargs):
    with pytest.raises(ValidationError):
        QuarticPotential(**kwargs)


def test_invalid_sextic():
    with pytest.raises(ValidationError):
        SexticPotential(a6=-1.0)


def test_qes_potential_examples():
    s = (2.0 + SQRT3) / 4.0
    pot = qes_potential(s, -SQRT3 / 4.0)
    assert pot.a2 == pytest.approx(0.0, abs=1e-14)
    assert pot.am2 == pytest.approx(0.5)
    assert pot.a6 == 1.0 and pot.a4 == 0.0

    pot = qes_potential(s, 1.0)
    assert pot.a2 == pytest.approx(-(4.0 + SQRT3))
    assert pot.am2 == pytest.approx(0.5)

    pot = qes_potential(0.25, 0.0)
    assert pot.a2 == pytest.approx(1.0)
    assert pot.am2 == 0.0


def test_qes_potential_matches_symbolic_form():
    s, J = sympy.Rational(2, 4) + sympy.sqrt(3) / 4, sympy.Integer(3)
    a2 = -(4 * s + 4 * J - 2)
    am2 = sympy.Rational(1, 4) * (4 * s - 1) * (4 * s - 3)
    pot = qes_potential(float(s), float(J))
    assert pot.a2 == pytest.approx(float(a2), abs=1e-14)
    assert sympy.simplify(am2 - sympy.Rational(1, 2)) == 0
    assert pot.am2 == pytest.approx(0.5, abs=1e-14)


def test_qes_levels():
    assert qes_level_count(3) == 3
    assert qes_level_count(2.5) == 0
    assert qes_level_count(0) == 0
    assert qes_termination_index(1) == 0
    assert qes_termination_index(4) == 6
    with pytest.raises(ValueError):
        qes_termination_index(1.5)


def test_value_is_vectorized():
    pot = QuarticPotential(a4=1.0, a2=-2.0, am2=1.0)
    values = pot.value([1.0, 2.0])
    assert values[0] == pytest.approx(0.0)
    assert values[1] == pytest.approx(16.0 - 8.0 + 0.25)


@pytest.mark.parametrize(
    "pot, expected",
    [
        (QuarticPotential(a4=1.0, a2=-10.0), -25.0),
        (QuarticPotential(a4=1.0, a2=2.0), 0.0),
        (SexticPotential(a6=1.0, a2=-3.0), -2.0),
        (HarmonicPotential(a2=1.0, am2=1.0), 2.0),
    ],
)
def test_minimum(pot, expected):
    assert pot.minimum() == pytest.approx(expected, abs=1e-10)


def test_minimum_with_attractive_centrifugal_term():
    assert QuarticPotential(a4=1.0, am2=-0.2).minimum() == -math.inf


def test_sector_exponents():
    pot = QuarticPotential(a4=1.0)
    assert sector_exponents(Sector.BOTH, pot) == [0.0, 1.0]
    assert sector_exponents(Sector.REGULAR, pot) == [1.0]
    assert sector_exponents(Sector.OTHER, pot) == [0.0]
    with pytest.raises(ValueError):
        sector_exponents(Sector.EVEN, QuarticPotential(a4=1.0, am2=0.5))


def test_sector_boundary():
    assert sector_boundary(Sector.EVEN, 0.0) == Boundary.EVEN_1D
    assert sector_boundary(Sector.BOTH, 1.0) == Boundary.ODD_1D
    assert sector_boundary(Sector.REGULAR, 1.366) == Boundary.DIRICHLET_ORIGIN
    with pytest.raises(ValueError):
        sector_boundary(Sector.OTHER, 0.0)
