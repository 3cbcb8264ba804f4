"""
Reproduction of the two embedded reference tables.

table1  double well V = r^4 + A2 r^2 in one dimension; E0, E2 even and E1, E3 odd
table2  V = r^6 - (4s + 4J - 2) r^2 + (4s - 1)(4s - 3)/4 r^-2 at s = (2 + sqrt3)/4,
        radial, regular root at the origin

Each (row, sector) pair is an independent cell so that CellPool can spread them
over worker processes.
"""
import json
import logging
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict

from anharmonic.exceptions import SpectrumError
from anharmonic.models import EnergyScanConfig, Family, Sector, TruncationConfig
from anharmonic.potential import QuarticPotential, qes_potential, sector_exponents
from anharmonic.schemas import TableRow
from anharmonic.solver import default_window, lowest_levels
from anharmonic.utils.expressions import parse_number
from anharmonic.utils.worker_pool import CellPool

logger = logging.getLogger(__name__)

DATA_PATH = Path(__file__).parent / "data" / "reference_tables.json"
TABLE_NAMES = ("table1", "table2")


@lru_cache(maxsize=1)
def load_reference_tables() -> Dict[str, Any]:
    with open(DATA_PATH, encoding="utf-8") as f:
        return json.load(f)


def reference_table(name: str) -> Dict[str, Any]:
    tables = load_reference_tables()
    if name not in tables:
        raise KeyError(f"unknown table {name!r}, expected one of {TABLE_NAMES}")
    return tables[name]


class TableCell(BaseModel):
    model_config = ConfigDict(frozen=True)

    table: str
    parameter: str
    sector: Sector
    levels: List[str]  # reference column names, lowest first
    references: List[float]
    tolerance: float
    h_order: Optional[int] = None


def table_cells(name: str, h_order: Optional[int] = None) -> List[TableCell]:
    table = reference_table(name)
    provenance = table["provenance"]
    columns = table["columns"][1:]
    cells = []
    for row in table["rows"]:
        parameter, values = str(row[0]), dict(zip(columns, row[1:]))
        by_sector: Dict[str, List[str]] = {}
        for column in columns:
            by_sector.setdefault(provenance["sectors"][column], []).append(column)
        for sector, levels in by_sector.items():
            cells.append(TableCell(
                table=name,
                parameter=parameter,
                sector=Sector(sector),
                levels=levels,
                references=[values[c] for c in levels],
                tolerance=provenance["tolerance"],
                h_order=h_order,
            ))
    return cells


def cell_potential(cell: TableCell):
    if cell.table == "table1":
        return Family.QUARTIC, QuarticPotential(a4=1.0, a2=parse_number(cell.parameter))
    s = parse_number(reference_table("table2")["provenance"]["fixed"]["qes_s"])
    return Family.SEXTIC, qes_potential(s, parse_number(cell.parameter))


def failed_rows(cell: TableCell, error: str) -> List[Dict[str, Any]]:
    return [
        TableRow(
            table=cell.table,
            parameter=cell.parameter,
            level=level,
            sector=cell.sector.value,
            E=None,
            E_full=None,
            reference=reference,
            abs_diff=None,
            estimated_error=None,
            qes_exact=False,
            within_tolerance=False,
            error=error,
        ).model_dump()
        for level, reference in zip(cell.levels, cell.references)
    ]


def solve_cell(cell: TableCell) -> List[Dict[str, Any]]:
    """Worker entry point: one sector of one table row."""
    family, pot = cell_potential(cell)
    (nu,) = sector_exponents(cell.sector, pot)
    trunc = TruncationConfig(h_order=cell.h_order) if cell.h_order else TruncationConfig()
    e_min, e_max = default_window(pot)
    config = EnergyScanConfig(e_min=e_min, e_max=e_max, truncation=trunc)
    try:
        results = lowest_levels(family, pot, nu, len(cell.levels), config)
    except SpectrumError as e:
        logger.error("%s row %s, %s sector failed: %s", cell.table, cell.parameter, cell.sector.value, e)
        return failed_rows(cell, str(e))

    rows = []
    for level, reference, result in zip(cell.levels, cell.references, results):
        diff = abs(result.energy - reference)
        rows.append(TableRow(
            table=cell.table,
            parameter=cell.parameter,
            level=level,
            sector=cell.sector.value,
            E=result.energy,
            E_full=result.energy,
            reference=reference,
            abs_diff=diff,
            estimated_error=result.estimated_error,
            qes_exact=result.qes_exact,
            within_tolerance=diff <= cell.tolerance,
        ).model_dump())
    return rows


def reproduce_table(name: str, pool: Optional[CellPool] = None, h_order: Optional[int] = None) -> List[Dict[str, Any]]:
    cells = table_cells(name, h_order)
    logger.info("reproducing %s: %d cells", name, len(cells))
    pool = pool or CellPool()
    per_cell = pool.map(solve_cell, cells)
    rows = [row for cell_rows in per_cell for row in cell_rows]
    order = {c: i for i, c in enumerate(reference_table(name)["columns"])}
    # back to the published layout: row by row, E0 .. E3
    params = list(dict.fromkeys(c.parameter for c in cells))
    rows.sort(key=lambda r: (params.index(r["parameter"]), order[r["level"]]))
    return rows
