import logging
from pathlib import Path
from typing import List

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    # Series truncation
    H_ORDER: int = 200
    B_ORDER: int = 0  # 0 = highest gamma index + H_ORDER + 2
    REFERENCE_N: int = 10
    N_SET: str = "10,11,12"
    STABILIZATION_TOL: float = 1e-10
    STABILIZATION_WINDOW: int = 5
    SPREAD_TOL: float = 1e-6
    QES_ZERO_THRESHOLD: float = 1e-10
    RECURRENCE_TOL: float = 1e-9

    # Arithmetic
    PRECISION: str = "double"  # double, extended
    EXTENDED_PRECISION_BITS: int = 128
    ESCALATE_PRECISION: bool = False

    # Energy scan and root refinement
    SCAN_STEP: float = 0.01
    ROOT_TOLERANCE: float = 1e-12
    MAX_REFINE_ITERATIONS: int = 200
    MAX_SEGMENT_POINTS: int = 4000  # scan points per window extension

    # Root polishing: deeper truncation in extended precision until the root settles
    POLISH_STEPS: int = 3
    POLISH_TOL: float = 1e-10
    POLISH_N_INCREMENT: int = 6
    POLISH_BITS_INCREMENT: int = 64

    # Shooting oracle
    ORACLE_GRID_POINTS: int = 20000
    ORACLE_R0: float = 1e-6
    ORACLE_QUARTIC_RMAX: float = 6.0
    ORACLE_SEXTIC_RMAX: float = 4.0
    ORACLE_ENERGY_TOL: float = 1e-11
    ORACLE_CUTOFF_MARGIN: float = 100.0

    # Output
    OUTPUT_DIR: str = "."
    OUTPUT_FORMAT: str = "csv"  # csv, json

    # Resource limiting
    MAX_CONCURRENT_CELLS: int = 4  # worker processes for table regeneration

    # Service
    RATE_LIMIT_SOLVE: str = "30 per minute"
    RATE_LIMIT_READ: str = "300 per minute"
    LOG_LEVEL: str = "INFO"

    @property
    def n_set_list(self) -> List[int]:
        return [int(n.strip()) for n in self.N_SET.split(",") if n.strip()]

    @property
    def output_path(self) -> Path:
        return Path(self.OUTPUT_DIR)

    class Config:
        env_file = ".env"
        env_prefix = "ANHARMONIC_"
        case_sensitive = True
        extra = "ignore"


settings = Settings()


def configure_logging(level: str = None) -> None:
    """Configure root logging once for the CLI and the service."""
    logging.basicConfig(
        level=(level or settings.LOG_LEVEL).upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
