"""
Independent shooting eigensolver used to cross-check the Wronskian method.

Radial problems (u(0) = 0 with u ~ r^nu) run on a logarithmic grid r = e^x with
u = sqrt(r) y, so that y'' = (r^2 (V - E) + 1/4) y. One-dimensional even and odd
states run on a uniform grid over [0, r_max] with u'(0) = 0 or u(0) = 0.
Nothing here depends on the series machinery.
"""
import logging
import math
from typing import List, Tuple

import numpy as np
from scipy.optimize import brentq

from anharmonic.config import settings
from anharmonic.exceptions import OracleBracketError, OracleCutoffError
from anharmonic.models import Boundary, Family, OracleConfig
from anharmonic.potential import Potential, indicial_exponents

logger = logging.getLogger(__name__)

RESCALE_LIMIT = 1e100
MAX_DOUBLINGS = 60
EXTENSION_FACTOR = 1.25


def default_r_max(pot: Potential) -> float:
    if pot.family == Family.SEXTIC:
        return settings.ORACLE_SEXTIC_RMAX
    return settings.ORACLE_QUARTIC_RMAX


class _ShootingGrid:
    def __init__(self, pot: Potential, boundary: Boundary, r_max: float, config: OracleConfig):
        if boundary != Boundary.DIRICHLET_ORIGIN and pot.am2 != 0:
            raise ValueError("one-dimensional parity states need am2 = 0")
        self.pot = pot
        self.boundary = boundary
        self.r_max = r_max
        self.logarithmic = boundary == Boundary.DIRICHLET_ORIGIN
        n = config.grid_points
        if self.logarithmic:
            if not config.r0 < r_max:
                raise ValueError("r0 must lie below r_max")
            self.x, self.h = np.linspace(math.log(config.r0), math.log(r_max), n + 1, retstep=True)
            self.r = np.exp(self.x)
            self.nu = indicial_exponents(pot.am2).nu_regular
        else:
            self.r, self.h = np.linspace(0.0, r_max, n + 1, retstep=True)
            self.x = self.r
            self.nu = 0.0 if boundary == Boundary.EVEN_1D else 1.0
        with np.errstate(divide="ignore", invalid="ignore"):
            v = pot.value(self.r)
        if not self.logarithmic:
            v[0] = 0.0  # am2 = 0, no singular term at the origin
        self.v = v
        self.matching_radius = config.matching_radius

    def g(self, E: float) -> np.ndarray:
        if self.logarithmic:
            return self.r * self.r * (self.v - E) + 0.25
        return self.v - E

    def numerov_factor(self, E: float) -> List[float]:
        return (1.0 - self.h * self.h * self.g(E) / 12.0).tolist()

    def seeds(self, E: float, f: List[float]) -> Tuple[float, float]:
        if self.logarithmic:
            p = self.nu - 0.5
            return math.exp(p * self.x[0]), math.exp(p * self.x[1])
        if self.boundary == Boundary.EVEN_1D:
            # y_{-1} = y_1 by symmetry
            return 1.0, (12.0 - 10.0 * f[0]) / (2.0 * f[1])
        return 0.0, self.h

    def matching_index(self, E: float) -> int:
        n = len(self.r) - 1
        if self.matching_radius is not None:
            i = int(np.searchsorted(self.r, self.matching_radius))
        else:
            allowed = np.nonzero(self.g(E) < 0)[0]
            i = int(allowed[-1]) + 1 if allowed.size else int(np.argmin(self.g(E)))
        return min(max(i, 2), n - 3)


def _outward(f: List[float], y0: float, y1: float, stop: int) -> np.ndarray:
    y = [0.0] * (stop + 1)
    y[0], y[1] = y0, y1
    for i in range(1, stop):
        y[i + 1] = ((12.0 - 10.0 * f[i]) * y[i] - f[i - 1] * y[i - 1]) / f[i + 1]
        if abs(y[i + 1]) > RESCALE_LIMIT:
            y = [v / RESCALE_LIMIT for v in y]
    return np.array(y)


def _inward(f: List[float], g_tail: Tuple[float, float], h: float, stop: int) -> np.ndarray:
    n = len(f) - 1
    y = [0.0] * (n + 1)
    # decaying WKB seed
    y[n] = 1.0
    y[n - 1] = math.exp(0.5 * h * (math.sqrt(max(g_tail[0], 0.0)) + math.sqrt(max(g_tail[1], 0.0))))
    for i in range(n - 1, stop, -1):
        y[i - 1] = ((12.0 - 10.0 * f[i]) * y[i] - f[i + 1] * y[i + 1]) / f[i - 1]
        if abs(y[i - 1]) > RESCALE_LIMIT:
            y = [v / RESCALE_LIMIT for v in y]
    return np.array(y)


def _crossings(y: np.ndarray) -> int:
    s = np.sign(y)
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))


def _nodes(grid: _ShootingGrid, E: float) -> int:
    f = grid.numerov_factor(E)
    y = _outward(f, *grid.seeds(E, f), len(f) - 1)
    return _crossings(y[1:])


def _mismatch(grid: _ShootingGrid, E: float) -> float:
    """Normalized discrete Wronskian of outward and inward solutions at the matching point."""
    f = grid.numerov_factor(E)
    m = grid.matching_index(E)
    g = grid.g(E)
    out = _outward(f, *grid.seeds(E, f), m + 1)
    inn = _inward(f, (float(g[-1]), float(g[-2])), grid.h, m - 1)
    cross = out[m - 1] * inn[m] - out[m] * inn[m - 1]
    return cross / (math.hypot(out[m], out[m - 1]) * math.hypot(inn[m], inn[m - 1]))


def count_nodes(pot: Potential, boundary: Boundary, E: float, config: OracleConfig = None) -> int:
    """Zeros of the outward solution on (0, r_max]: the number of levels below E."""
    config = config or OracleConfig()
    grid = _ShootingGrid(pot, boundary, config.r_max or default_r_max(pot), config)
    return _nodes(grid, E)


def _upper_energy(grid: _ShootingGrid, count: int, e_low: float) -> float:
    span = max(1.0, abs(e_low))
    for _ in range(MAX_DOUBLINGS):
        e_high = e_low + span
        if _nodes(grid, e_high) >= count:
            return e_high
        span *= 2.0
    raise OracleBracketError(f"node count never reached {count}")


def _level(grid: _ShootingGrid, k: int, e_low: float, e_high: float, tol: float) -> float:
    lo, hi = e_low, e_high
    n_lo, n_hi = _nodes(grid, lo), _nodes(grid, hi)
    if n_lo > k or n_hi <= k:
        raise OracleBracketError(f"level {k} not inside [{lo}, {hi}]")
    # isolate level k by node count
    while not (n_lo == k and n_hi == k + 1) and hi - lo > tol:
        mid = 0.5 * (lo + hi)
        n_mid = _nodes(grid, mid)
        if n_mid > k:
            hi, n_hi = mid, n_mid
        else:
            lo, n_lo = mid, n_mid
    f_lo, f_hi = _mismatch(grid, lo), _mismatch(grid, hi)
    if f_lo * f_hi < 0:
        return brentq(lambda E: _mismatch(grid, E), lo, hi, xtol=tol)
    logger.debug("level %d: no mismatch sign change on [%s, %s], bisecting nodes", k, lo, hi)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _nodes(grid, mid) > k:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def oracle_eigenvalues(
    pot: Potential,
    boundary: Boundary,
    count: int,
    config: OracleConfig = None,
) -> List[float]:
    """The lowest `count` levels by Numerov shooting and node counting."""
    if count < 1:
        raise ValueError("count must be positive")
    config = config or OracleConfig()
    r_max = config.r_max or default_r_max(pot)

    for attempt in range(config.max_extensions + 1):
        grid = _ShootingGrid(pot, boundary, r_max, config)
        e_low = float(np.min(grid.v[np.isfinite(grid.v)]))
        e_high = _upper_energy(grid, count, e_low)
        margin = float(pot.value(r_max)) - e_high
        if margin >= config.cutoff_margin:
            break
        logger.info("oracle cutoff too short (V(r_max) - E = %.3g), r_max %.3g -> %.3g",
                    margin, r_max, r_max * EXTENSION_FACTOR)
        r_max *= EXTENSION_FACTOR
    else:
        raise OracleCutoffError(
            f"V(r_max) - E < {config.cutoff_margin} after {config.max_extensions} extensions"
        )

    levels = [_level(grid, k, e_low, e_high, config.energy_tolerance) for k in range(count)]
    logger.debug("oracle %s levels: %s", boundary.value, levels)
    return levels
