"""Job runners shared by the command line and the HTTP service."""
import logging
from typing import Any, Dict, List

from anharmonic import __version__
from anharmonic.exceptions import SpectrumError
from anharmonic.models import EigenvalueResult, EnergyScanConfig
from anharmonic.oracle import oracle_eigenvalues
from anharmonic.potential import Potential, sector_boundary, sector_exponents
from anharmonic.schemas import (
    EigenvalueRow,
    JobSpec,
    PotentialRequest,
    ResultSet,
    ScanRequest,
    ScanRow,
    SolveRequest,
)
from anharmonic.solver import default_window, lowest_levels, merge_sectors, scan_grid
from anharmonic.wronskian import make_evaluator

logger = logging.getLogger(__name__)

DEFAULT_COMPARE_TOLERANCE = 1e-6


def describe(request: PotentialRequest, pot: Potential) -> Dict[str, Any]:
    trunc = request.truncation()
    meta = {
        "tool": f"anharmonic {__version__}",
        "family": request.family.value,
        "sector": request.resolved_sector().value,
        "h_order": trunc.h_order,
        "reference_n": trunc.reference_n,
        "n_set": ",".join(str(n) for n in trunc.n_set),
        "precision": trunc.precision.value,
    }
    meta.update({name: value for name, value in pot.model_dump().items()})
    if request.is_qes:
        meta.update({"qes_s": request.qes_s, "qes_j": request.qes_j})
    return meta


def solve_levels(request: SolveRequest) -> List[EigenvalueResult]:
    if request.count == 0:
        return []
    pot = request.potential()
    sector = request.resolved_sector()
    e_min, e_max = default_window(pot, request.e_min, request.e_max)
    config = request.scan_config(e_min, e_max)
    per_sector = [
        lowest_levels(request.family, pot, nu, request.count, config, auto_extend=request.e_max is None)
        for nu in sector_exponents(sector, pot)
    ]
    if len(per_sector) == 1:
        return per_sector[0]
    return merge_sectors(*per_sector)[: request.count]


def run_solve(request: SolveRequest) -> ResultSet:
    pot = request.potential()
    sector = request.resolved_sector()
    results = solve_levels(request)
    rows = [
        EigenvalueRow(
            sector=sector.value,
            nu=r.sector_nu,
            level=r.index_in_sector,
            E=r.energy,
            E_full=r.energy,
            estimated_error=r.estimated_error,
            qes_exact=r.qes_exact,
            converged=r.converged,
        ).model_dump()
        for r in results
    ]
    ok = all(r.converged for r in results)
    if request.tolerance is not None:
        ok = ok and all(r.estimated_error <= request.tolerance for r in results)
    return ResultSet(rows=rows, meta=describe(request, pot), ok=ok)


def run_scan(request: ScanRequest) -> ResultSet:
    pot = request.potential()
    config = EnergyScanConfig(
        e_min=request.e_min,
        e_max=request.e_max,
        truncation=request.truncation(),
        **({"step": request.step} if request.step else {}),
    )
    rows = []
    ok = True
    for nu in sector_exponents(request.resolved_sector(), pot):
        W = make_evaluator(request.family, pot, nu, config.truncation)
        for E in scan_grid(config):
            try:
                value = W(float(E))
            except SpectrumError as e:
                logger.warning("scan sample E=%s failed: %s", E, e)
                ok = False
                continue
            ok = ok and value.converged
            rows.append(ScanRow(
                nu=nu,
                E=value.energy,
                W=value.value,
                W_normalized=value.normalized,
                spread=value.spread,
                converged=value.converged,
            ).model_dump())
    return ResultSet(rows=rows, meta=describe(request, pot), ok=ok)


def run_oracle(job: JobSpec) -> ResultSet:
    pot = job.potential()
    sector = job.resolved_sector()
    rows = []
    for nu in (sector_exponents(sector, pot) if job.count else []):
        levels = oracle_eigenvalues(pot, sector_boundary(sector, nu), job.count, job.oracle_config())
        rows.extend({"sector": sector.value, "nu": nu, "level": k, "E": E, "E_full": E} for k, E in enumerate(levels))
    if len(rows) > job.count:
        rows = sorted(rows, key=lambda r: r["E"])[: job.count]
        for k, row in enumerate(rows):
            row["level"] = k
    meta = describe(job, pot)
    meta["method"] = "numerov shooting"
    return ResultSet(rows=rows, meta=meta)


def run_compare(job: JobSpec) -> ResultSet:
    tolerance = job.tolerance or DEFAULT_COMPARE_TOLERANCE
    pot = job.potential()
    sector = job.resolved_sector()
    results = solve_levels(job)

    oracle: Dict[float, List[float]] = {}
    for nu in dict.fromkeys(r.sector_nu for r in results):
        wanted = sum(1 for r in results if r.sector_nu == nu)
        oracle[nu] = oracle_eigenvalues(pot, sector_boundary(sector, nu), wanted, job.oracle_config())

    rows = []
    seen: Dict[float, int] = {}
    for result in results:
        k = seen.get(result.sector_nu, 0)
        seen[result.sector_nu] = k + 1
        reference = oracle[result.sector_nu][k]
        diff = abs(result.energy - reference)
        rows.append({
            "nu": result.sector_nu,
            "level": result.index_in_sector,
            "E": result.energy,
            "E_full": result.energy,
            "E_oracle": reference,
            "abs_diff": diff,
            "within_tolerance": diff <= tolerance,
        })
    meta = describe(job, pot)
    meta["tolerance"] = tolerance
    return ResultSet(rows=rows, meta=meta, ok=all(r["within_tolerance"] for r in rows))
