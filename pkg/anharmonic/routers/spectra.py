import asyncio

from fastapi import APIRouter, HTTPException, Request, Response, status

from anharmonic.jobs import run_scan, run_solve
from anharmonic.schemas import APIResponse, ScanRequest, SolveRequest
from anharmonic.tables import TABLE_NAMES, reference_table
from anharmonic.utils.rate_limit import RATE_LIMIT_READ, RATE_LIMIT_SOLVE, limiter

router = APIRouter(prefix="/spectra", tags=["spectra"])


@router.post("/solve", response_model=APIResponse)
@limiter.limit(RATE_LIMIT_SOLVE)
async def solve(request: Request, response: Response, body: SolveRequest):
    """
    Lowest eigenvalues of one potential
    """
    # numerical work stays off the event loop
    loop = asyncio.get_running_loop()
    result = await loop.run_in_executor(None, run_solve, body)
    return APIResponse(
        status="success" if result.ok else "warning",
        message=f"{len(result.rows)} levels",
        data={"meta": result.meta, "rows": result.rows},
    )


@router.post("/scan", response_model=APIResponse)
@limiter.limit(RATE_LIMIT_SOLVE)
async def scan(request: Request, response: Response, body: ScanRequest):
    """
    W(E) sampled on an energy grid
    """
    loop = asyncio.get_running_loop()
    result = await loop.run_in_executor(None, run_scan, body)
    return APIResponse(
        status="success" if result.ok else "warning",
        message=f"{len(result.rows)} samples",
        data={"meta": result.meta, "rows": result.rows},
    )


@router.get("/tables/{name}", response_model=APIResponse)
@limiter.limit(RATE_LIMIT_READ)
async def get_table(request: Request, response: Response, name: str):
    """
    Embedded reference values (no recomputation)
    """
    if name not in TABLE_NAMES:
        raise HTTPException(
            status_code=status.HTTP_404_NOT_FOUND,
            detail=f"Unknown table, expected one of {', '.join(TABLE_NAMES)}",
        )
    return APIResponse(status="success", message=name, data=reference_table(name))
