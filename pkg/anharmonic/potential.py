"""
Potential families of the effective radial problem -u'' + V(r) u = E u.

    quartic   V = A4 r^4 + A2 r^2 + A_{-2} r^-2
    sextic    V = A6 r^6 + A4 r^4 + A2 r^2 + A_{-2} r^-2
    harmonic  V = A2 r^2 + A_{-2} r^-2   (oracle baseline only)

together with the Frobenius exponents at the origin and the exponents of the
two asymptotic solutions at infinity.
"""
import math
from typing import Dict, List, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from anharmonic.exceptions import ComplexIndicialError
from anharmonic.models import AsymptoticSolutionSpec, Boundary, Branch, Family, IndicialPair, Sector

DEGENERACY_TOL = 1e-15


class _EffectivePotential(BaseModel):
    model_config = ConfigDict(frozen=True)

    am2: float = 0.0

    @model_validator(mode="after")
    def check_indicial(self):
        if 1.0 + 4.0 * self.am2 < -DEGENERACY_TOL:
            raise ValueError("1 + 4*am2 must be non-negative")
        return self

    def coefficients(self) -> Dict[int, float]:
        raise NotImplementedError

    def value(self, r):
        r = np.asarray(r, dtype=float)
        return sum(c * r ** p for p, c in self.coefficients().items() if c != 0.0)

    def minimum(self) -> float:
        """Infimum of V over r > 0 (-inf for an attractive centrifugal term)."""
        if self.am2 < 0:
            return -math.inf
        coeffs = self.coefficients()
        # V as a function of x = r^2; stationary points solve x^2 dV/dx = 0
        poly = {p // 2 + 1: (p // 2) * c for p, c in coeffs.items() if p > 0}
        degree = max(poly)
        dense = [poly.get(d, 0.0) for d in range(degree, 0, -1)] + [-self.am2]
        candidates = [0.0] if self.am2 == 0 else []
        for root in np.roots(dense):
            if abs(root.imag) < 1e-12 and root.real > 0:
                candidates.append(float(root.real))
        return min(
            (float(self.value(math.sqrt(x))) if x > 0 else 0.0) for x in candidates
        )


class QuarticPotential(_EffectivePotential):
    a4: float
    a2: float = 0.0

    @field_validator("a4")
    @classmethod
    def confining(cls, v):
        if not v > 0:
            raise ValueError("a4 must be positive")
        return v

    @property
    def family(self) -> Family:
        return Family.QUARTIC

    def coefficients(self) -> Dict[int, float]:
        return {4: self.a4, 2: self.a2, -2: self.am2}


class SexticPotential(_EffectivePotential):
    a6: float
    a4: float = 0.0
    a2: float = 0.0

    @field_validator("a6")
    @classmethod
    def confining(cls, v):
        if not v > 0:
            raise ValueError("a6 must be positive")
        return v

    @property
    def family(self) -> Family:
        return Family.SEXTIC

    def coefficients(self) -> Dict[int, float]:
        return {6: self.a6, 4: self.a4, 2: self.a2, -2: self.am2}


class HarmonicPotential(_EffectivePotential):
    a2: float = 1.0

    @field_validator("a2")
    @classmethod
    def confining(cls, v):
        if not v > 0:
            raise ValueError("a2 must be positive")
        return v

    @property
    def family(self) -> Family:
        return Family.HARMONIC

    def coefficients(self) -> Dict[int, float]:
        return {2: self.a2, -2: self.am2}


Potential = Union[QuarticPotential, SexticPotential, HarmonicPotential]


def indicial_exponents(am2: float) -> IndicialPair:
    """Roots of nu (nu - 1) = A_{-2}, larger first."""
    disc = 1.0 + 4.0 * am2
    if disc < -DEGENERACY_TOL:
        raise ComplexIndicialError(f"1 + 4*am2 = {disc} < 0")
    if abs(disc) <= DEGENERACY_TOL:
        return IndicialPair(nu_regular=0.5, nu_other=0.5, degenerate=True)
    root = math.sqrt(disc)
    return IndicialPair(nu_regular=(1.0 + root) / 2.0, nu_other=(1.0 - root) / 2.0)


def quartic_exponents(pot: QuarticPotential, branch: Branch) -> AsymptoticSolutionSpec:
    sign = -1.0 if branch == Branch.RECESSIVE else 1.0
    root = math.sqrt(pot.a4)
    return AsymptoticSolutionSpec(
        family=Family.QUARTIC,
        alphas=(sign * pot.a2 / (2.0 * root), 0.0, sign * root),
        mu=-1.0,
        branch=branch,
    )


def sextic_exponents(pot: SexticPotential, branch: Branch) -> AsymptoticSolutionSpec:
    sign = -1.0 if branch == Branch.RECESSIVE else 1.0
    root = math.sqrt(pot.a6)
    shift = (4.0 * pot.a6 * pot.a2 - pot.a4 ** 2) / (8.0 * pot.a6 * root)
    return AsymptoticSolutionSpec(
        family=Family.SEXTIC,
        alphas=(0.0, sign * pot.a4 / (2.0 * root), 0.0, sign * root),
        mu=-1.5 + sign * shift,
        branch=branch,
    )


def asymptotic_exponents(pot: Potential, branch: Branch = Branch.RECESSIVE) -> AsymptoticSolutionSpec:
    if isinstance(pot, QuarticPotential):
        return quartic_exponents(pot, branch)
    if isinstance(pot, SexticPotential):
        return sextic_exponents(pot, branch)
    raise TypeError(f"no asymptotic expansion for {type(pot).__name__}")


def qes_potential(s: float, J: float) -> SexticPotential:
    """V = r^6 - (4s + 4J - 2) r^2 + (4s - 1)(4s - 3)/4 r^-2."""
    return SexticPotential(
        a6=1.0,
        a4=0.0,
        a2=-(4.0 * s + 4.0 * J - 2.0),
        am2=0.25 * (4.0 * s - 1.0) * (4.0 * s - 3.0),
    )


def qes_level_count(J: float) -> int:
    """Number of exactly solvable levels; zero unless J is a positive integer."""
    if J >= 1 and float(J).is_integer():
        return int(J)
    return 0


def qes_termination_index(J: float) -> int:
    """Index after which the h-series of an exact QES level vanishes."""
    count = qes_level_count(J)
    if not count:
        raise ValueError(f"J={J} does not give a quasi-exactly solvable potential")
    return 2 * (count - 1)


def sector_exponents(sector: Sector, pot: Potential) -> List[float]:
    """Values of nu that make up a sector; 'both' means even then odd."""
    if sector in (Sector.EVEN, Sector.ODD, Sector.BOTH):
        if pot.am2 != 0:
            raise ValueError("parity sectors need am2 = 0")
        return {Sector.EVEN: [0.0], Sector.ODD: [1.0], Sector.BOTH: [0.0, 1.0]}[sector]
    pair = indicial_exponents(pot.am2)
    return [pair.nu_regular if sector == Sector.REGULAR else pair.nu_other]


def sector_boundary(sector: Sector, nu: float) -> Boundary:
    """Oracle boundary condition matching one nu of a sector."""
    if sector == Sector.REGULAR:
        return Boundary.DIRICHLET_ORIGIN
    if sector == Sector.OTHER:
        raise ValueError("the shooting oracle follows the regular root only")
    return Boundary.EVEN_1D if nu == 0.0 else Boundary.ODD_1D
