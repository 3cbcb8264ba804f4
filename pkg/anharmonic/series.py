"""
Coefficient sequences behind the Wronskian closed forms.

h_m  asymptotic coefficients of u^(1) ~ exp(sum alpha_p r^p / p) r^mu sum h_m r^-m
b_n  power-series coefficients of the auxiliary function w(r) = sum b_n r^(n+nu),
     w = exp(phi) u_reg with phi = alpha_1 r - alpha_3 r^3/3 (quartic) or
     alpha_2 r^2/2 - alpha_4 r^4/4 (sextic)
gamma_k  coefficients of the formal r-power expansion of the Wronskian of the
     auxiliary functions, pairing h_m with b_n.

Every recurrence runs unchanged on floats or on mpmath.mpf: the arithmetic of
the energy argument decides the working precision.
"""
import logging
from typing import Dict, Iterable, List, Optional

from pydantic import BaseModel, ConfigDict, Field

from anharmonic.config import settings
from anharmonic.exceptions import InconsistentRecurrenceError
from anharmonic.models import (
    AsymptoticSolutionSpec,
    BCoefficients,
    Branch,
    Family,
    GammaCoefficients,
    GammaEstimate,
    GammaStatus,
    HCoefficients,
)
from anharmonic.potential import QuarticPotential, SexticPotential
from anharmonic.utils.numeric import unit_like

logger = logging.getLogger(__name__)

DEGENERATE_FACTOR_TOL = 1e-12


class TruncationPolicy(BaseModel):
    model_config = ConfigDict(frozen=True)

    tol: float = Field(default_factory=lambda: settings.STABILIZATION_TOL, gt=0)
    window: int = Field(default_factory=lambda: settings.STABILIZATION_WINDOW, ge=1)


def _check_family(spec: AsymptoticSolutionSpec, family: Family) -> None:
    if spec.family != family:
        raise ValueError(f"expected a {family.value} branch, got {spec.family.value}")


def _check_recessive(spec: AsymptoticSolutionSpec) -> None:
    if spec.branch != Branch.RECESSIVE:
        raise ValueError("the w-representation is built on the recessive branch")


# ---------------------------------------------------------------------------
# Asymptotic coefficients h_m
# ---------------------------------------------------------------------------

def quartic_h(spec: AsymptoticSolutionSpec, am2: float, E, M: int) -> HCoefficients:
    _check_family(spec, Family.QUARTIC)
    if M < 0:
        raise ValueError("truncation order must be non-negative")
    a1, a3 = spec.alpha(1), spec.alpha(3)
    shifted = E + a1 * a1
    h = [unit_like(E)]
    for m in range(1, M + 1):
        acc = shifted * h[m - 1]
        if m >= 2:
            acc -= 2 * a1 * (m - 1) * h[m - 2]
        if m >= 3:
            acc += ((m - 1) * (m - 2) - am2) * h[m - 3]
        h.append(acc / (2 * a3 * m))
    return HCoefficients(values=h, truncation_order=M, branch=spec.branch)


def sextic_h(
    spec: AsymptoticSolutionSpec,
    am2: float,
    E,
    M: int,
    zero_threshold: Optional[float] = None,
) -> HCoefficients:
    _check_family(spec, Family.SEXTIC)
    if M < 0:
        raise ValueError("truncation order must be non-negative")
    if zero_threshold is None:
        zero_threshold = settings.QES_ZERO_THRESHOLD
    a2, a4, mu = spec.alpha(2), spec.alpha(4), spec.mu
    zero = 0 * E
    h = [unit_like(E)]
    largest = 1.0
    run = 0
    terminated_at = None
    for m in range(1, M + 1):
        if terminated_at is not None or m % 2:
            h.append(zero)
            continue
        acc = (E + a2 * (-2 * m + 5 + 2 * mu)) * h[m - 2]
        if m >= 4:
            acc += ((m - 4 - mu) * (m - 3 - mu) - am2) * h[m - 4]
        value = acc / (2 * a4 * m)
        magnitude = float(abs(value))
        # two consecutive even-index zeros switch the two-step recurrence off
        if magnitude <= zero_threshold * largest:
            run += 1
            if run == 2:
                terminated_at = m - 4
                h[m - 2] = zero
                value = zero
        else:
            run = 0
            largest = max(largest, magnitude)
        h.append(value)
    if terminated_at is not None:
        logger.debug("h-series terminates after index %d at E=%s", terminated_at, E)
    return HCoefficients(
        values=h,
        truncation_order=M,
        qes_terminated=terminated_at is not None,
        termination_index=terminated_at,
        branch=spec.branch,
    )


# ---------------------------------------------------------------------------
# Power-series coefficients b_n of w(r)
# ---------------------------------------------------------------------------

def _exp_series(poly: Dict[int, float], order: int, one) -> List:
    """Taylor coefficients of exp(sum poly[p] r^p) up to r^order."""
    e = [one]
    for j in range(1, order + 1):
        acc = 0 * one
        for p, c in poly.items():
            if p <= j and c:
                acc += p * c * e[j - p]
        e.append(acc / j)
    return e


def _frobenius_choice(b: List, n: int, inverse_prefactor: Dict[int, float]):
    """b_n making the r^(n+nu) coefficient of u = exp(-phi) w vanish."""
    e = _exp_series(inverse_prefactor, n, b[0])
    return -sum(e[j] * b[n - j] for j in range(1, n + 1))


def _solve_step(n, nu, rhs_terms, b, inverse_prefactor, tol, degenerate):
    rhs = sum(rhs_terms)
    lead = n * (n - 1 + 2 * nu)
    if abs(n - 1 + 2 * nu) > DEGENERATE_FACTOR_TOL:
        return rhs / lead
    scale = max([float(abs(t)) for t in rhs_terms] + [1e-300])
    if float(abs(rhs)) > tol * scale and float(abs(rhs)) > 1e-300:
        raise InconsistentRecurrenceError(n, float(rhs))
    degenerate.append(n)
    return _frobenius_choice(b, n, inverse_prefactor)


def quartic_b(
    spec: AsymptoticSolutionSpec,
    nu: float,
    a2: float,
    E,
    K: int,
    tol: Optional[float] = None,
) -> BCoefficients:
    _check_family(spec, Family.QUARTIC)
    _check_recessive(spec)
    if K < 0:
        raise ValueError("truncation order must be non-negative")
    tol = settings.RECURRENCE_TOL if tol is None else tol
    a1, a3 = spec.alpha(1), spec.alpha(3)
    shifted = E + a1 * a1
    inverse_prefactor = {1: -a1, 3: a3 / 3.0}
    b = [unit_like(E)]
    degenerate: List[int] = []
    for n in range(1, K + 1):
        terms = [2 * a1 * (n - 1 + nu) * b[n - 1]]
        if n >= 2:
            terms.append(-shifted * b[n - 2])
        if n >= 3:
            terms.append(-2 * a3 * (n - 2 + nu) * b[n - 3])
        if n >= 4:
            terms.append(2 * a2 * b[n - 4])
        b.append(_solve_step(n, nu, terms, b, inverse_prefactor, tol, degenerate))
    return BCoefficients(values=b, nu=nu, truncation_order=K, degenerate_steps=tuple(degenerate))


def sextic_b(
    spec: AsymptoticSolutionSpec,
    nu: float,
    pot: SexticPotential,
    E,
    K: int,
    tol: Optional[float] = None,
) -> BCoefficients:
    _check_family(spec, Family.SEXTIC)
    _check_recessive(spec)
    if K < 0:
        raise ValueError("truncation order must be non-negative")
    tol = settings.RECURRENCE_TOL if tol is None else tol
    a2, a4 = spec.alpha(2), spec.alpha(4)
    inverse_prefactor = {2: -a2 / 2.0, 4: a4 / 4.0}
    b = [unit_like(E)]
    degenerate: List[int] = []
    for n in range(1, K + 1):
        terms = [0 * b[0]]
        if n >= 2:
            terms.append((-E + a2 * (2 * n - 3 + 2 * nu)) * b[n - 2])
        if n >= 4:
            terms.append((pot.a2 - a2 * a2 - a4 * (2 * n - 5 + 2 * nu)) * b[n - 4])
        if n >= 6:
            terms.append(2 * pot.a4 * b[n - 6])
        b.append(_solve_step(n, nu, terms, b, inverse_prefactor, tol, degenerate))
    return BCoefficients(values=b, nu=nu, truncation_order=K, degenerate_steps=tuple(degenerate))


# ---------------------------------------------------------------------------
# Gamma sums
# ---------------------------------------------------------------------------

def accumulate(terms: List, index: int, policy: Optional[TruncationPolicy] = None) -> GammaEstimate:
    """Sum a series under the stabilization / optimal-truncation policy."""
    policy = policy or TruncationPolicy()
    total = 0 * terms[0] if terms else 0.0
    magnitudes = []
    for t in terms:
        total += t
        magnitudes.append(float(abs(t)))
    max_term = max(magnitudes, default=0.0)
    last = magnitudes[-1] if magnitudes else 0.0
    scale = max(float(abs(total)), max_term)

    tail = magnitudes[-policy.window:]
    if len(magnitudes) > policy.window and all(m <= policy.tol * scale for m in tail):
        status = GammaStatus.STABILIZED
        used = len(terms)
        value = total
    elif max_term == 0.0:
        status, used, value = GammaStatus.STABILIZED, len(terms), total
    else:
        nonzero = [i for i, m in enumerate(magnitudes) if m > 0.0]
        i_min = min(nonzero, key=lambda i: magnitudes[i])
        following = [i for i in nonzero if i > i_min][: policy.window]
        clear = (
            i_min > 0
            and len(following) == policy.window
            and all(magnitudes[i] > magnitudes[i_min] for i in following)
        )
        if clear:
            status = GammaStatus.OPTIMAL_TRUNCATION
            used = i_min
            value = sum(terms[:i_min], 0 * terms[0])
        else:
            status = GammaStatus.NOT_CONVERGED
            used = len(terms)
            value = total
        logger.debug(
            "gamma_%d: partial sums not stabilized after %d terms (%s, last |term|=%.3e)",
            index, len(terms), status.value, last,
        )
    return GammaEstimate(
        index=index,
        value=value,
        status=status,
        terms_used=used,
        last_increment=last,
        max_term=max_term,
    )


def quartic_gamma(
    h: HCoefficients,
    b: BCoefficients,
    spec: AsymptoticSolutionSpec,
    nu: float,
    k: int,
    policy: Optional[TruncationPolicy] = None,
) -> GammaEstimate:
    """gamma_k = sum_m h_m (2 alpha_1 b_{k+m} - (2m + k + 2 + nu) b_{k+m+1}), k >= 1."""
    if k < 1:
        raise ValueError("the series form holds for positive indices only")
    hv, bv = h.values, b.values
    last = min(len(hv) - 1, len(bv) - k - 2)
    if last < 0:
        raise ValueError(f"b-series of order {len(bv) - 1} too short for gamma_{k}")
    a1 = spec.alpha(1)
    terms = [
        hv[m] * (2 * a1 * bv[k + m] - (2 * m + k + 2 + nu) * bv[k + m + 1])
        for m in range(last + 1)
    ]
    return accumulate(terms, k, policy)


def sextic_gamma(
    h: HCoefficients,
    b: BCoefficients,
    spec: AsymptoticSolutionSpec,
    nu: float,
    two_k: int,
    policy: Optional[TruncationPolicy] = None,
) -> GammaEstimate:
    """gamma_2k = sum_m h_2m (2 alpha_2 b_{2k+2m} - (2k + 4m + 2 + nu - mu) b_{2k+2m+2})."""
    if two_k < 0 or two_k % 2:
        raise ValueError("sextic gamma indices are even and non-negative")
    hv, bv = h.values, b.values
    last = min((len(hv) - 1) // 2, (len(bv) - two_k - 3) // 2)
    if last < 0:
        raise ValueError(f"b-series of order {len(bv) - 1} too short for gamma_{two_k}")
    a2, mu = spec.alpha(2), spec.mu
    terms = [
        hv[2 * m] * (2 * a2 * bv[two_k + 2 * m] - (two_k + 4 * m + 2 + nu - mu) * bv[two_k + 2 * m + 2])
        for m in range(last + 1)
    ]
    return accumulate(terms, two_k, policy)


def gamma_coefficients(
    family: Family,
    h: HCoefficients,
    b: BCoefficients,
    spec: AsymptoticSolutionSpec,
    nu: float,
    indices: Iterable[int],
    policy: Optional[TruncationPolicy] = None,
) -> GammaCoefficients:
    single = quartic_gamma if family == Family.QUARTIC else sextic_gamma
    values = {k: single(h, b, spec, nu, k, policy) for k in sorted(set(indices))}
    return GammaCoefficients(family=family, values=values)


# ---------------------------------------------------------------------------
# Self-check against the differential equation of w
# ---------------------------------------------------------------------------

def residual_check(family: Family, spec: AsymptoticSolutionSpec, nu: float, pot, E: float, r: float, K: int) -> float:
    """|w'' + p w' + q w| at r from the truncated b-series."""
    if not 0 < r <= 1:
        raise ValueError("residual check needs 0 < r <= 1")
    if family == Family.QUARTIC:
        if not isinstance(pot, QuarticPotential):
            raise TypeError("quartic residual needs a QuarticPotential")
        b = quartic_b(spec, nu, pot.a2, E, K).values
        a1, a3 = spec.alpha(1), spec.alpha(3)
        p = 2 * (a3 * r * r - a1)
        q = -2 * pot.a2 * r * r + 2 * a3 * r + E + a1 * a1 - pot.am2 / (r * r)
    elif family == Family.SEXTIC:
        if not isinstance(pot, SexticPotential):
            raise TypeError("sextic residual needs a SexticPotential")
        b = sextic_b(spec, nu, pot, E, K).values
        a2, a4 = spec.alpha(2), spec.alpha(4)
        p = 2 * (a4 * r ** 3 - a2 * r)
        q = (
            -2 * pot.a4 * r ** 4
            + (3 * a4 + a2 * a2 - pot.a2) * r * r
            + E - a2 - pot.am2 / (r * r)
        )
    else:
        raise ValueError(f"no w-equation for family {family.value}")

    w = dw = d2w = 0.0
    for n, coeff in enumerate(b):
        s = n + nu
        w += coeff * r ** s
        dw += s * coeff * r ** (s - 1)
        d2w += s * (s - 1) * coeff * r ** (s - 2)
    return float(abs(d2w + p * dw + q * w))
