"""
Wronskian W(E) of the origin-regular and the recessive asymptotic solution.

Both closed forms are sums of Gamma-weighted gamma coefficients

    W = sum_j Gamma(a_j) c^(1 - a_j) gamma_{k_j}

quartic: c = -2 alpha_3 / 3, a_j = n + 1 + (nu + j)/3, k_j = 3n + 1 + j (j = 0, 1, 2)
sextic:  c = -alpha_4 / 2,   a_j = n + 1 + (1 + nu + mu + 2j)/4, k_j = 4n + 2j (j = 0, 1)

and are independent of n; the spread over several n is the convergence
diagnostic.
"""
import logging
import math
from typing import Callable, Dict, List, Optional, Tuple

import mpmath

from anharmonic.exceptions import DegenerateIndicialError, GammaPoleError
from anharmonic.models import (
    Branch,
    Family,
    GammaCoefficients,
    Precision,
    TruncationConfig,
    WronskianValue,
)
from anharmonic.potential import (
    Potential,
    QuarticPotential,
    SexticPotential,
    indicial_exponents,
    quartic_exponents,
    sextic_exponents,
)
from anharmonic.series import (
    TruncationPolicy,
    gamma_coefficients,
    quartic_b,
    quartic_h,
    sextic_b,
    sextic_h,
)
from anharmonic.utils.numeric import exp, is_extended, log, working_number, working_precision

logger = logging.getLogger(__name__)

LANCZOS_G = 7
LANCZOS_COEFFICIENTS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
HALF_LOG_TWO_PI = 0.5 * math.log(2.0 * math.pi)

# ln Gamma(1 + z) = -euler z + sum_k (-1)^k zeta(k) z^k / k, used for |z| <= 1/2
TAYLOR_TERMS = 60
TAYLOR_COEFFICIENTS = (-float(mpmath.euler),) + tuple(
    (-1) ** k * float(mpmath.zeta(k)) / k for k in range(2, TAYLOR_TERMS + 1)
)


def _check_pole(x) -> None:
    if x <= 0 and float(x).is_integer():
        raise GammaPoleError(f"Gamma has a pole at x={x}")


def _log_gamma_one_plus(z: float) -> float:
    acc = 0.0
    for c in reversed(TAYLOR_COEFFICIENTS):
        acc = acc * z + c
    return acc * z


def log_gamma(x):
    """ln|Gamma(x)|; Lanczos for floats, mpmath for extended arguments."""
    _check_pole(x)
    if is_extended(x):
        return mpmath.log(abs(mpmath.gamma(x)))
    x = float(x)
    if x < 0.5:
        return math.log(math.pi / abs(math.sin(math.pi * x))) - log_gamma(1.0 - x)
    # Lanczos loses relative accuracy around the zeros at 1 and 2
    if x < 1.5:
        return _log_gamma_one_plus(x - 1.0)
    if x < 2.5:
        return _log_gamma_one_plus(x - 2.0) + math.log1p(x - 2.0)
    x -= 1.0
    acc = LANCZOS_COEFFICIENTS[0]
    for i, p in enumerate(LANCZOS_COEFFICIENTS[1:], start=1):
        acc += p / (x + i)
    t = x + LANCZOS_G + 0.5
    return HALF_LOG_TWO_PI + (x + 0.5) * math.log(t) - t + math.log(acc)


def gamma_sign(x) -> int:
    _check_pole(x)
    if x > 0:
        return 1
    return -1 if math.floor(float(x)) % 2 else 1


def _closed_form(c, terms: List[Tuple[float, object]]) -> Tuple[object, object]:
    """Sum of Gamma(a) c^(1-a) gamma over (a, gamma) pairs, and the sum of |terms|."""
    log_c = log(c)
    value = 0 * c
    magnitude = 0 * c
    for a, g in terms:
        if is_extended(c):
            a = mpmath.mpf(a)
        weight = gamma_sign(a) * exp(log_gamma(a) + (1 - a) * log_c)
        term = weight * g
        value += term
        magnitude += abs(term)
    return value, magnitude


def _assemble(
    energy: float,
    per_n: Dict[int, Tuple[object, object]],
    reference_n: int,
    gammas: GammaCoefficients,
    trunc: TruncationConfig,
    precision: Precision,
) -> WronskianValue:
    value, magnitude = per_n[reference_n]
    scale = float(magnitude) or 1e-300
    n_values = {n: float(v) for n, (v, _) in per_n.items()}
    spread = max(abs(v - float(value)) for v in n_values.values()) / scale
    converged = spread <= trunc.spread_tol
    if not converged:
        logger.warning("W(E=%s) not converged: spread=%.3e", energy, spread)
    return WronskianValue(
        energy=float(energy),
        value=float(value),
        normalized=float(value) / scale,
        scale=scale,
        spread=spread,
        converged=converged,
        gammas_stabilized=gammas.converged,
        n_values=n_values,
        precision=precision,
    )


def _policy(trunc: TruncationConfig) -> TruncationPolicy:
    return TruncationPolicy(tol=trunc.stabilization_tol, window=trunc.stabilization_window)


def _orders(trunc: TruncationConfig, n: Optional[int], with_spread: bool) -> Tuple[int, List[int]]:
    reference = trunc.reference_n if n is None else n
    ns = sorted(set(trunc.n_set) | {reference}) if with_spread else [reference]
    return reference, ns


def quartic_wronskian(
    pot: QuarticPotential,
    nu: float,
    E: float,
    n: Optional[int] = None,
    trunc: Optional[TruncationConfig] = None,
    with_spread: bool = True,
) -> WronskianValue:
    trunc = trunc or TruncationConfig()
    reference, ns = _orders(trunc, n, with_spread)
    spec = quartic_exponents(pot, Branch.RECESSIVE)
    indices = [3 * m + 1 + j for m in ns for j in range(3)]

    with working_precision(trunc.precision, trunc.extended_bits):
        energy = working_number(E, trunc.precision)
        h = quartic_h(spec, pot.am2, energy, trunc.h_order)
        b = quartic_b(spec, nu, pot.a2, energy, trunc.b_order_for(max(indices)), trunc.recurrence_tol)
        gammas = gamma_coefficients(Family.QUARTIC, h, b, spec, nu, indices, _policy(trunc))
        c = working_number(-2.0 * spec.alpha(3) / 3.0, trunc.precision)
        per_n = {
            m: _closed_form(c, [(m + 1 + (nu + j) / 3.0, gammas[3 * m + 1 + j]) for j in range(3)])
            for m in ns
        }
        return _assemble(E, per_n, reference, gammas, trunc, trunc.precision)


def sextic_wronskian(
    pot: SexticPotential,
    nu: float,
    E: float,
    n: Optional[int] = None,
    trunc: Optional[TruncationConfig] = None,
    with_spread: bool = True,
) -> WronskianValue:
    trunc = trunc or TruncationConfig()
    reference, ns = _orders(trunc, n, with_spread)
    spec = sextic_exponents(pot, Branch.RECESSIVE)
    indices = [4 * m + 2 * j for m in ns for j in range(2)]

    with working_precision(trunc.precision, trunc.extended_bits):
        energy = working_number(E, trunc.precision)
        h = sextic_h(spec, pot.am2, energy, trunc.h_order, trunc.qes_zero_threshold)
        b = sextic_b(spec, nu, pot, energy, trunc.b_order_for(max(indices)), trunc.recurrence_tol)
        gammas = gamma_coefficients(Family.SEXTIC, h, b, spec, nu, indices, _policy(trunc))
        c = working_number(-spec.alpha(4) / 2.0, trunc.precision)
        shift = 1.0 + nu + spec.mu
        per_n = {
            m: _closed_form(c, [(m + 1 + (shift + 2 * j) / 4.0, gammas[4 * m + 2 * j]) for j in range(2)])
            for m in ns
        }
        return _assemble(E, per_n, reference, gammas, trunc, trunc.precision)


class WronskianEvaluator:
    """E -> WronskianValue for one potential and one sector."""

    def __init__(
        self,
        family: Family,
        pot: Potential,
        nu: float,
        trunc: TruncationConfig,
        with_spread: bool = True,
    ):
        if family == Family.QUARTIC and isinstance(pot, QuarticPotential):
            self._closed_form: Callable[..., WronskianValue] = quartic_wronskian
        elif family == Family.SEXTIC and isinstance(pot, SexticPotential):
            self._closed_form = sextic_wronskian
        else:
            raise ValueError(f"no Wronskian closed form for {family.value} with {type(pot).__name__}")
        pair = indicial_exponents(pot.am2)
        if pair.degenerate:
            raise DegenerateIndicialError("1 + 4*am2 = 0: logarithmic solution at the origin")
        if abs(nu * (nu - 1.0) - pot.am2) > 1e-9:
            raise ValueError(f"nu={nu} is not an indicial exponent for am2={pot.am2}")
        self.family = family
        self.pot = pot
        self.nu = nu
        self.trunc = trunc
        self.with_spread = with_spread
        self.evaluations = 0

    def __call__(self, E: float) -> WronskianValue:
        self.evaluations += 1
        result = self._closed_form(self.pot, self.nu, E, trunc=self.trunc, with_spread=self.with_spread)
        if not result.converged and self.trunc.escalate_precision and self.trunc.precision == Precision.DOUBLE:
            logger.info("escalating to %d-bit arithmetic at E=%s", self.trunc.extended_bits, E)
            extended = self.trunc.model_copy(update={"precision": Precision.EXTENDED})
            result = self._closed_form(self.pot, self.nu, E, trunc=extended, with_spread=self.with_spread)
        return result

    def with_truncation(self, trunc: TruncationConfig, with_spread: Optional[bool] = None) -> "WronskianEvaluator":
        spread = self.with_spread if with_spread is None else with_spread
        return WronskianEvaluator(self.family, self.pot, self.nu, trunc, spread)


def make_evaluator(
    family: Family,
    pot: Potential,
    nu: float,
    trunc: Optional[TruncationConfig] = None,
    with_spread: bool = True,
) -> WronskianEvaluator:
    return WronskianEvaluator(family, pot, nu, trunc or TruncationConfig(), with_spread)
