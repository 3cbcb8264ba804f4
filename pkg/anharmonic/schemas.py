from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from anharmonic.config import settings
from anharmonic.models import (
    EnergyScanConfig,
    Family,
    OracleConfig,
    OutputFormat,
    Precision,
    Sector,
    TruncationConfig,
)
from anharmonic.potential import (
    Potential,
    QuarticPotential,
    SexticPotential,
    qes_potential,
)
from anharmonic.utils.expressions import parse_number


# Response Models
class APIResponse(BaseModel):
    status: str
    message: str
    data: Optional[dict] = None


# Requests
class PotentialRequest(BaseModel):
    family: Family = Family.QUARTIC
    a6: Optional[float] = None
    a4: Optional[float] = None
    a2: float = 0.0
    am2: float = 0.0
    qes_s: Optional[str] = None  # expressions such as "(2+sqrt3)/4"
    qes_j: Optional[str] = None
    sector: Optional[Sector] = None

    h_order: Optional[int] = Field(None, ge=0)
    b_order: Optional[int] = Field(None, ge=0)
    reference_n: Optional[int] = Field(None, ge=0)
    precision: Precision = Field(default_factory=lambda: Precision(settings.PRECISION))

    @field_validator("family")
    @classmethod
    def supported_family(cls, v):
        if v == Family.HARMONIC:
            raise ValueError("the harmonic family is an oracle baseline only")
        return v

    @model_validator(mode="after")
    def check_parameters(self):
        qes = self.qes_s is not None or self.qes_j is not None
        if qes and self.family != Family.SEXTIC:
            raise ValueError("qes_s/qes_j describe a sextic potential")
        if qes and (self.qes_s is None or self.qes_j is None):
            raise ValueError("qes_s and qes_j go together")
        if self.family == Family.SEXTIC and not qes and self.a6 is None:
            raise ValueError("a sextic potential needs a6")
        return self

    @property
    def is_qes(self) -> bool:
        return self.qes_s is not None

    def potential(self) -> Potential:
        if self.is_qes:
            return qes_potential(parse_number(self.qes_s), parse_number(self.qes_j))
        if self.family == Family.QUARTIC:
            return QuarticPotential(a4=1.0 if self.a4 is None else self.a4, a2=self.a2, am2=self.am2)
        return SexticPotential(a6=self.a6, a4=self.a4 or 0.0, a2=self.a2, am2=self.am2)

    def resolved_sector(self) -> Sector:
        if self.sector is not None:
            return self.sector
        # 1D parity for a plain polynomial, radial otherwise
        if self.am2 == 0 and not self.is_qes:
            return Sector.BOTH
        return Sector.REGULAR

    def truncation(self) -> TruncationConfig:
        overrides = {
            "h_order": self.h_order,
            "b_order": self.b_order,
            "reference_n": self.reference_n,
            "precision": self.precision,
        }
        return TruncationConfig(**{k: v for k, v in overrides.items() if v is not None})


class SolveRequest(PotentialRequest):
    count: int = Field(4, ge=0, le=50)
    e_min: Optional[float] = None
    e_max: Optional[float] = None
    step: Optional[float] = Field(None, gt=0)
    tolerance: Optional[float] = Field(None, gt=0)

    def scan_config(self, e_min: float, e_max: float) -> EnergyScanConfig:
        kwargs: Dict[str, Any] = {"e_min": e_min, "e_max": e_max, "truncation": self.truncation()}
        if self.step is not None:
            kwargs["step"] = self.step
        return EnergyScanConfig(**kwargs)


class ScanRequest(PotentialRequest):
    e_min: float
    e_max: float
    step: Optional[float] = Field(None, gt=0)

    @model_validator(mode="after")
    def check_window(self):
        if self.e_min > self.e_max:
            raise ValueError("e_min must not exceed e_max")
        step = self.step or settings.SCAN_STEP
        if (self.e_max - self.e_min) / step > 100000:
            raise ValueError("scan grid too large")
        return self


class JobSpec(SolveRequest):
    """A fully resolved CLI job."""
    command: str
    table: Optional[str] = None
    format: OutputFormat = Field(default_factory=lambda: OutputFormat(settings.OUTPUT_FORMAT))
    output: Optional[Path] = None
    include_meta: bool = True
    grid_points: Optional[int] = Field(None, ge=100)
    r_max: Optional[float] = Field(None, gt=0)

    @model_validator(mode="after")
    def check_command(self):
        if self.command == "scan" and (self.e_min is None or self.e_max is None):
            raise ValueError("scan needs e_min and e_max")
        if self.command == "tables" and self.table not in ("table1", "table2"):
            raise ValueError("tables needs table1 or table2")
        return self

    def scan_request(self) -> ScanRequest:
        fields = PotentialRequest.model_fields.keys()
        return ScanRequest(
            **{k: getattr(self, k) for k in fields},
            e_min=self.e_min,
            e_max=self.e_max,
            step=self.step,
        )

    def oracle_config(self) -> OracleConfig:
        overrides = {"grid_points": self.grid_points, "r_max": self.r_max}
        return OracleConfig(**{k: v for k, v in overrides.items() if v is not None})


class EigenvalueRow(BaseModel):
    sector: str
    nu: float
    level: int
    E: float
    E_full: float
    estimated_error: float
    qes_exact: bool
    converged: bool


class ScanRow(BaseModel):
    nu: float
    E: float
    W: float
    W_normalized: float
    spread: float
    converged: bool


class TableRow(BaseModel):
    table: str
    parameter: str
    level: str
    sector: str
    E: Optional[float]
    E_full: Optional[float]
    reference: float
    abs_diff: Optional[float]
    estimated_error: Optional[float]
    qes_exact: bool
    within_tolerance: bool
    error: Optional[str] = None  # set when the cell could not be solved


class ResultSet(BaseModel):
    rows: List[Dict[str, Any]]
    meta: Dict[str, Any]
    ok: bool = True
