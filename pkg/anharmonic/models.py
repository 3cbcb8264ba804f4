from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from anharmonic.config import settings


class Family(str, Enum):
    QUARTIC = "quartic"
    SEXTIC = "sextic"
    HARMONIC = "harmonic"  # shooting-oracle baseline only


class Branch(str, Enum):
    RECESSIVE = "recessive"  # u^(1), decays at infinity
    DOMINANT = "dominant"  # u^(2)


class Precision(str, Enum):
    DOUBLE = "double"
    EXTENDED = "extended"


class Boundary(str, Enum):
    DIRICHLET_ORIGIN = "dirichlet_origin"
    EVEN_1D = "even_1d"
    ODD_1D = "odd_1d"


class Sector(str, Enum):
    EVEN = "even"  # 1D, nu = 0
    ODD = "odd"  # 1D, nu = 1
    BOTH = "both"
    REGULAR = "regular"  # radial, larger indicial root
    OTHER = "other"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


class GammaStatus(str, Enum):
    STABILIZED = "stabilized"
    OPTIMAL_TRUNCATION = "optimal_truncation"
    NOT_CONVERGED = "not_converged"


class IndicialPair(BaseModel):
    model_config = ConfigDict(frozen=True)

    nu_regular: float  # larger root
    nu_other: float
    degenerate: bool = False

    @model_validator(mode="after")
    def check_order(self):
        if self.nu_regular < self.nu_other:
            raise ValueError("nu_regular must be the larger indicial root")
        return self


class AsymptoticSolutionSpec(BaseModel):
    """Exponents of exp(sum alpha_p r^p / p) r^mu sum h_m r^-m."""
    model_config = ConfigDict(frozen=True)

    family: Family
    alphas: Tuple[float, ...]  # alpha_1 .. alpha_{N+1}
    mu: float
    branch: Branch

    @model_validator(mode="after")
    def check_branch_sign(self):
        if self.family == Family.HARMONIC:
            raise ValueError("asymptotic expansions are defined for quartic and sextic families only")
        expected = 3 if self.family == Family.QUARTIC else 4
        if len(self.alphas) != expected:
            raise ValueError(f"{self.family.value} branch needs {expected} exponents")
        lead = self.alphas[-1]
        if self.branch == Branch.RECESSIVE and not lead < 0:
            raise ValueError("recessive branch needs a negative leading exponent")
        if self.branch == Branch.DOMINANT and not lead > 0:
            raise ValueError("dominant branch needs a positive leading exponent")
        return self

    def alpha(self, p: int) -> float:
        return self.alphas[p - 1]

    @property
    def leading(self) -> float:
        return self.alphas[-1]


class HCoefficients(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    values: List[Any]  # float or mpmath.mpf
    truncation_order: int
    qes_terminated: bool = False
    termination_index: Optional[int] = None
    branch: Branch = Branch.RECESSIVE

    @field_validator("values")
    @classmethod
    def check_leading(cls, v):
        if not v or v[0] != 1:
            raise ValueError("h_0 must be 1")
        return v


class BCoefficients(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    values: List[Any]
    nu: float
    truncation_order: int
    degenerate_steps: Tuple[int, ...] = ()

    @field_validator("values")
    @classmethod
    def check_leading(cls, v):
        if not v or v[0] != 1:
            raise ValueError("b_0 must be 1")
        return v


class GammaEstimate(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    index: int
    value: Any
    status: GammaStatus
    terms_used: int
    last_increment: float
    max_term: float

    @property
    def converged(self) -> bool:
        return self.status != GammaStatus.NOT_CONVERGED


class GammaCoefficients(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    family: Family
    values: Dict[int, GammaEstimate]

    @property
    def converged(self) -> bool:
        return all(g.converged for g in self.values.values())

    def __getitem__(self, k: int):
        return self.values[k].value


class TruncationConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    h_order: int = Field(default_factory=lambda: settings.H_ORDER, ge=0)
    b_order: int = Field(default_factory=lambda: settings.B_ORDER, ge=0)
    reference_n: int = Field(default_factory=lambda: settings.REFERENCE_N, ge=0)
    n_set: Tuple[int, ...] = Field(default_factory=lambda: tuple(settings.n_set_list))
    stabilization_tol: float = Field(default_factory=lambda: settings.STABILIZATION_TOL, gt=0)
    stabilization_window: int = Field(default_factory=lambda: settings.STABILIZATION_WINDOW, ge=1)
    spread_tol: float = Field(default_factory=lambda: settings.SPREAD_TOL, gt=0)
    qes_zero_threshold: float = Field(default_factory=lambda: settings.QES_ZERO_THRESHOLD, gt=0)
    recurrence_tol: float = Field(default_factory=lambda: settings.RECURRENCE_TOL, gt=0)
    precision: Precision = Field(default_factory=lambda: Precision(settings.PRECISION))
    extended_bits: int = Field(default_factory=lambda: settings.EXTENDED_PRECISION_BITS, ge=128)
    escalate_precision: bool = Field(default_factory=lambda: settings.ESCALATE_PRECISION)

    @field_validator("n_set")
    @classmethod
    def check_n_set(cls, v):
        if any(n < 0 for n in v):
            raise ValueError("closed-form indices must be non-negative")
        return tuple(sorted(set(v)))

    def b_order_for(self, max_index: int) -> int:
        """b-series length needed to pair every h_m with b_{max_index + m + 1}."""
        if self.b_order:
            return self.b_order
        return max_index + self.h_order + 2

    def all_n(self) -> List[int]:
        return sorted(set(self.n_set) | {self.reference_n})

    def for_n(self, reference_n: int, n_set: Optional[Tuple[int, ...]] = None) -> "TruncationConfig":
        update = {"reference_n": reference_n}
        if n_set is not None:
            update["n_set"] = tuple(sorted(set(n_set)))
        return self.model_copy(update=update)


class WronskianValue(BaseModel):
    model_config = ConfigDict(frozen=True)

    energy: float
    value: float  # closed form at the reference n
    normalized: float  # value / scale, what the root finder sees
    scale: float
    spread: float = 0.0  # max relative deviation over n_set
    converged: bool = True  # spread within spread_tol
    gammas_stabilized: bool = True
    n_values: Dict[int, float] = Field(default_factory=dict)
    precision: Precision = Precision.DOUBLE

    @field_validator("scale")
    @classmethod
    def check_scale(cls, v):
        if not v > 0:
            raise ValueError("scale must be positive")
        return v


class EnergyScanConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    e_min: float
    e_max: float
    step: float = Field(default_factory=lambda: settings.SCAN_STEP, gt=0)
    root_tolerance: float = Field(default_factory=lambda: settings.ROOT_TOLERANCE, gt=0)
    max_refine_iterations: int = Field(default_factory=lambda: settings.MAX_REFINE_ITERATIONS, ge=1)
    truncation: TruncationConfig = Field(default_factory=TruncationConfig)
    estimate_drift: bool = True  # polish every root and measure its n-drift
    polish_steps: int = Field(default_factory=lambda: settings.POLISH_STEPS, ge=0)
    polish_tolerance: float = Field(default_factory=lambda: settings.POLISH_TOL, gt=0)

    @model_validator(mode="after")
    def check_range(self):
        if self.e_min > self.e_max:
            raise ValueError("e_min must not exceed e_max")
        return self

    @property
    def n_set(self) -> Tuple[int, ...]:
        return self.truncation.n_set


class EigenvalueResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    energy: float
    sector_nu: float
    bracket: Tuple[float, float]
    estimated_error: float
    index_in_sector: int
    qes_exact: bool = False
    n_drift: float = 0.0
    truncation_drift: float = 0.0
    converged: bool = True

    @model_validator(mode="after")
    def check_bracket(self):
        lo, hi = self.bracket
        if not lo <= self.energy <= hi:
            raise ValueError("bracket must contain the energy")
        return self


class OracleConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    r_max: Optional[float] = Field(default=None, gt=0)  # None = family default
    grid_points: int = Field(default_factory=lambda: settings.ORACLE_GRID_POINTS, ge=100)
    matching_radius: Optional[float] = Field(default=None, gt=0)  # None = outer turning point
    energy_tolerance: float = Field(default_factory=lambda: settings.ORACLE_ENERGY_TOL, gt=0)
    r0: float = Field(default_factory=lambda: settings.ORACLE_R0, gt=0)
    cutoff_margin: float = Field(default_factory=lambda: settings.ORACLE_CUTOFF_MARGIN, gt=0)
    max_extensions: int = 8
