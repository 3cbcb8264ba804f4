"""
Eigenvalues as zeros of the normalized Wronskian.

Grid scan for sign changes, a halving pass for close pairs and brentq
refinement. Each root is then polished: the truncation is deepened (longer
h-series, larger reference n, more bits) until the root stops moving, and the
last move is the truncation-drift estimate.
"""
import logging
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.optimize import brentq

from anharmonic.config import settings
from anharmonic.exceptions import (
    InsufficientRootsError,
    LostBracketError,
    MaxIterationsError,
    RootRefinementError,
    SpectrumError,
)
from anharmonic.models import (
    Branch,
    EigenvalueResult,
    EnergyScanConfig,
    Family,
    Precision,
    TruncationConfig,
    WronskianValue,
)
from anharmonic.potential import Potential, SexticPotential, sextic_exponents
from anharmonic.series import sextic_h
from anharmonic.wronskian import WronskianEvaluator, make_evaluator

logger = logging.getLogger(__name__)

MIN_POLISH_H_ORDER = 40
MAX_POLISH_WIDTH = 1.0

Bracket = Tuple[float, float]


class ScanReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    brackets: List[Bracket] = Field(default_factory=list)
    samples: List[WronskianValue] = Field(default_factory=list)
    warnings: List[str] = Field(default_factory=list)


def scan_grid(config: EnergyScanConfig) -> np.ndarray:
    if config.e_min == config.e_max:
        return np.array([config.e_min])
    count = int(np.ceil((config.e_max - config.e_min) / config.step)) + 1
    return np.linspace(config.e_min, config.e_max, count)


def _sample(W: WronskianEvaluator, energies, warnings: List[str]) -> List[WronskianValue]:
    kept = []
    for E in energies:
        try:
            value = W(float(E))
        except SpectrumError as e:
            warnings.append(f"E={E:.10g}: {e}")
            logger.warning("dropping sample E=%s: %s", E, e)
            continue
        if not value.converged:
            # still a valid sign; the root found from it gets flagged instead
            warnings.append(f"E={E:.10g}: not converged (spread={value.spread:.3e})")
        kept.append(value)
    return kept


def _sign_changes(samples: List[WronskianValue]) -> List[Bracket]:
    out = []
    for left, right in zip(samples, samples[1:]):
        if left.normalized == 0.0:
            out.append((left.energy, left.energy))
        elif left.normalized * right.normalized < 0:
            out.append((left.energy, right.energy))
    if samples and samples[-1].normalized == 0.0:
        out.append((samples[-1].energy, samples[-1].energy))
    return out


def _halve(W: WronskianEvaluator, bracket: Bracket, warnings: List[str]) -> List[Bracket]:
    lo, hi = bracket
    if lo == hi:
        return [bracket]
    points = _sample(W, [lo, 0.5 * (lo + hi), hi], warnings)
    found = _sign_changes(points)
    return found or [bracket]


def _near_pairs(W: WronskianEvaluator, samples: List[WronskianValue], warnings: List[str]) -> List[Bracket]:
    """Sign changes hidden between grid points around local minima of |W|."""
    out = []
    for prev, mid, nxt in zip(samples, samples[1:], samples[2:]):
        same_sign = prev.normalized * mid.normalized > 0 and mid.normalized * nxt.normalized > 0
        dip = abs(mid.normalized) < abs(prev.normalized) and abs(mid.normalized) < abs(nxt.normalized)
        if not (same_sign and dip):
            continue
        midpoints = [0.5 * (prev.energy + mid.energy), 0.5 * (mid.energy + nxt.energy)]
        refined = sorted([prev, mid, nxt] + _sample(W, midpoints, warnings), key=lambda v: v.energy)
        pairs = _sign_changes(refined)
        if pairs:
            logger.debug("resolved %d close roots near E=%s", len(pairs), mid.energy)
        out.extend(pairs)
    return out


def scan_brackets(
    family: Family,
    pot: Potential,
    nu: float,
    config: EnergyScanConfig,
    evaluator: Optional[WronskianEvaluator] = None,
) -> ScanReport:
    W = evaluator or make_evaluator(family, pot, nu, config.truncation)
    warnings: List[str] = []
    samples = _sample(W, scan_grid(config), warnings)
    brackets = []
    for bracket in _sign_changes(samples):
        brackets.extend(_halve(W, bracket, warnings))
    brackets.extend(_near_pairs(W, samples, warnings))
    brackets = sorted(set(brackets))
    logger.debug("scan [%s, %s] nu=%s: %d brackets", config.e_min, config.e_max, nu, len(brackets))
    return ScanReport(brackets=brackets, samples=samples, warnings=warnings)


def refine_root(
    W: WronskianEvaluator,
    bracket: Bracket,
    config: EnergyScanConfig,
    index: int = 0,
) -> EigenvalueResult:
    lo, hi = bracket
    f = lambda E: W(E).normalized
    if lo == hi:
        root = lo
    else:
        f_lo, f_hi = f(lo), f(hi)
        if f_lo * f_hi > 0:
            raise LostBracketError(f"W keeps its sign on [{lo}, {hi}]")
        root, info = brentq(
            f, lo, hi,
            xtol=config.root_tolerance,
            maxiter=config.max_refine_iterations,
            full_output=True,
            disp=False,
        )
        if not info.converged:
            raise MaxIterationsError(
                f"brentq did not converge in {config.max_refine_iterations} iterations on [{lo}, {hi}]"
            )
    return EigenvalueResult(
        energy=root,
        sector_nu=W.nu,
        bracket=(lo, hi),
        estimated_error=config.root_tolerance,
        index_in_sector=index,
        converged=W(root).converged,
    )


def _n_drift(W: WronskianEvaluator, result: EigenvalueResult, config: EnergyScanConfig) -> float:
    """Root shift implied by the n-spread of W at the root."""
    at_root = W(result.energy)
    step = max(1e-6, 1e3 * config.root_tolerance)
    slope = (W(result.energy + step).normalized - W(result.energy - step).normalized) / (2 * step)
    if slope == 0.0:
        return float("inf")
    return at_root.spread / abs(slope)


def deepen(trunc: TruncationConfig, step: int) -> TruncationConfig:
    """Truncation used at polishing step `step`: longer h-series, larger n, more bits."""
    shift = step * settings.POLISH_N_INCREMENT
    return trunc.model_copy(update={
        "h_order": (step + 1) * max(trunc.h_order, MIN_POLISH_H_ORDER),
        "b_order": 0,
        "reference_n": trunc.reference_n + shift,
        "n_set": tuple(n + shift for n in trunc.n_set),
        "precision": Precision.EXTENDED,
        "extended_bits": trunc.extended_bits + step * settings.POLISH_BITS_INCREMENT,
        "escalate_precision": False,
    })


def _rebracket(W: WronskianEvaluator, guess: float, limit: float) -> Bracket:
    """Smallest symmetric window around `guess` over which W changes sign."""
    f0 = W(guess).normalized
    if f0 == 0.0:
        return guess, guess
    h = max(1e-8, 1e-10 * abs(guess))
    f1 = W(guess + h).normalized
    if f0 * f1 <= 0:
        return guess, guess + h
    secant = guess - f0 * h / (f1 - f0) if f1 != f0 else guess
    width = min(limit, max(2.0 * abs(secant - guess), 10.0 * h))
    while True:
        lo, hi = guess - width, guess + width
        if W(lo).normalized * f0 <= 0:
            return lo, guess
        if W(hi).normalized * f0 <= 0:
            return guess, hi
        if width >= limit:
            raise LostBracketError(f"no sign change within {limit:.3g} of E={guess}")
        width = min(limit, 4.0 * width)


def _polish(
    W: WronskianEvaluator,
    result: EigenvalueResult,
    config: EnergyScanConfig,
    limit: float,
) -> Tuple[EigenvalueResult, WronskianEvaluator, float, bool]:
    """Re-solve with deeper truncations until successive roots agree within polish_tolerance."""
    current, evaluator, change = result, W, 0.0
    for step in range(1, config.polish_steps + 1):
        deeper = W.with_truncation(deepen(config.truncation, step), with_spread=False)
        try:
            bracket = _rebracket(deeper, current.energy, limit)
            polished = refine_root(deeper, bracket, config, current.index_in_sector)
        except RootRefinementError as e:
            logger.warning("polishing stopped at step %d near E=%s: %s", step, current.energy, e)
            return current, evaluator, max(change, limit), False
        change = abs(polished.energy - current.energy)
        current, evaluator = polished, deeper
        logger.debug("polish step %d: E=%.14f moved %.3e", step, current.energy, change)
        if change <= config.polish_tolerance:
            return current, evaluator, change, True
    return current, evaluator, change, config.polish_steps == 0


def _polish_limit(brackets: List[Bracket], index: int) -> float:
    lo, hi = brackets[index]
    gaps = []
    if index > 0:
        gaps.append(lo - brackets[index - 1][1])
    if index + 1 < len(brackets):
        gaps.append(brackets[index + 1][0] - hi)
    gaps = [g for g in gaps if g > 0]
    return min([MAX_POLISH_WIDTH] + [0.45 * g for g in gaps])


def is_qes_exact(pot: Potential, energy: float, h_order: int, threshold: float) -> bool:
    if not isinstance(pot, SexticPotential):
        return False
    spec = sextic_exponents(pot, Branch.RECESSIVE)
    return sextic_h(spec, pot.am2, energy, h_order, threshold).qes_terminated



def _resolve(
    W: WronskianEvaluator,
    pot: Potential,
    brackets: List[Bracket],
    count: int,
    config: EnergyScanConfig,
) -> List[EigenvalueResult]:
    trunc = config.truncation
    results = []
    for index, bracket in enumerate(brackets[:count]):
        result = refine_root(W, bracket, config, index)
        qes_exact = is_qes_exact(pot, result.energy, trunc.h_order, trunc.qes_zero_threshold)
        converged = result.converged
        if qes_exact:
            # every gamma vanishes at a terminated level; the n-spread there is rounding
            n_drift = truncation_drift = 0.0
            converged = True
        elif not config.estimate_drift:
            n_drift, truncation_drift = _n_drift(W, result, config), 0.0
        else:
            limit = _polish_limit(brackets, index)
            result, deepest, truncation_drift, settled = _polish(W, result, config, limit)
            with_spread = deepest.with_truncation(deepest.trunc, with_spread=True)
            n_drift = _n_drift(with_spread, result, config)
            converged = settled and with_spread(result.energy).converged
        results.append(result.model_copy(update={
            "n_drift": n_drift,
            "truncation_drift": truncation_drift,
            "estimated_error": max(config.root_tolerance, n_drift, truncation_drift),
            "qes_exact": qes_exact,
            "converged": converged,
        }))
        logger.debug("nu=%s level %d: E=%.12f", W.nu, index, result.energy)
    return results


def eigenvalues(
    family: Family,
    pot: Potential,
    nu: float,
    count: int,
    config: EnergyScanConfig,
) -> List[EigenvalueResult]:
    """The lowest `count` roots of W in [e_min, e_max] for sector nu."""
    if count < 1:
        raise ValueError("count must be positive")
    W = make_evaluator(family, pot, nu, config.truncation)
    report = scan_brackets(family, pot, nu, config, evaluator=W)
    if len(report.brackets) < count:
        raise InsufficientRootsError(count, len(report.brackets), config.e_max)
    return _resolve(W, pot, report.brackets, count, config)


def merge_sectors(*sectors: List[EigenvalueResult]) -> List[EigenvalueResult]:
    merged = sorted((r for sector in sectors for r in sector), key=lambda r: r.energy)
    return [r.model_copy(update={"index_in_sector": i}) for i, r in enumerate(merged)]


def lowest_levels(
    family: Family,
    pot: Potential,
    nu: float,
    count: int,
    config: EnergyScanConfig,
    auto_extend: bool = True,
    max_extensions: int = 6,
) -> List[EigenvalueResult]:
    """eigenvalues() with the window extended upward until `count` roots fit.

    Each extension doubles the span and only the new segment is scanned, with a
    step that doubles per extension and is capped at MAX_SEGMENT_POINTS samples.
    """
    if count < 1:
        raise ValueError("count must be positive")
    W = make_evaluator(family, pot, nu, config.truncation)
    brackets = list(scan_brackets(family, pot, nu, config, evaluator=W).brackets)
    e_max, step = config.e_max, config.step
    for attempt in range(max_extensions + 1):
        if len(brackets) >= count:
            return _resolve(W, pot, sorted(set(brackets)), count, config)
        if not auto_extend or attempt == max_extensions:
            break
        span = max(e_max - config.e_min, 1.0)
        lo, hi = e_max, config.e_min + 2.0 * span
        step = max(2.0 * step, (hi - lo) / settings.MAX_SEGMENT_POINTS)
        logger.info("only %d of %d roots below E=%s, scanning up to %s", len(brackets), count, lo, hi)
        segment = config.model_copy(update={"e_min": lo, "e_max": hi, "step": step})
        brackets.extend(scan_brackets(family, pot, nu, segment, evaluator=W).brackets)
        brackets = sorted(set(brackets))
        e_max = hi
    raise InsufficientRootsError(count, len(brackets), e_max)


def default_window(pot: Potential, e_min: Optional[float] = None, e_max: Optional[float] = None) -> Tuple[float, float]:
    """Energy window starting just below the minimum of V."""
    if e_min is None:
        floor = pot.minimum()
        if not np.isfinite(floor):
            raise ValueError("V is unbounded below; pass e_min explicitly")
        e_min = floor - 0.5
    if e_max is None:
        e_max = e_min + max(10.0, abs(e_min))
    return e_min, e_max
