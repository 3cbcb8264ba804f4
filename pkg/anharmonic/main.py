import logging

from fastapi import FastAPI, Request, status
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from slowapi.errors import RateLimitExceeded

from anharmonic import __version__
from anharmonic.config import configure_logging
from anharmonic.exceptions import SpectrumError
from anharmonic.models import Family
from anharmonic.routers import spectra
from anharmonic.schemas import APIResponse
from anharmonic.tables import TABLE_NAMES
from anharmonic.utils.rate_limit import limiter

configure_logging()
logger = logging.getLogger(__name__)

app = FastAPI(
    title="anharmonic",
    version=__version__,
    docs_url=None,
    redoc_url=None,
)

app.state.limiter = limiter


@app.exception_handler(RateLimitExceeded)
async def custom_rate_limit_handler(request: Request, exc: RateLimitExceeded):
    """
    Custom rate limit handler that doesn't expose sensitive information
    """
    return JSONResponse(
        status_code=status.HTTP_429_TOO_MANY_REQUESTS,
        content={
            "status": "error",
            "message": "Too many requests. Please try again later.",
            "data": None
        }
    )


@app.exception_handler(SpectrumError)
async def spectrum_error_handler(request: Request, exc: SpectrumError):
    return JSONResponse(
        status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
        content={
            "status": "error",
            "message": f"{type(exc).__name__}: {exc}",
            "data": None
        }
    )


@app.exception_handler(ValueError)
async def invalid_parameters_handler(request: Request, exc: ValueError):
    # potential coefficients are validated when the job runs, not when the body is parsed
    return JSONResponse(
        status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
        content={
            "status": "error",
            "message": "Invalid potential parameters",
            "data": None
        }
    )


app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


@app.exception_handler(Exception)
async def global_exception_handler(request: Request, exc: Exception):
    logger.exception("unhandled error on %s", request.url.path)
    return JSONResponse(
        status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
        content={
            "status": "error",
            "message": "An unexpected error occurred",
            "data": None
        }
    )


app.include_router(spectra.router)


@app.get("/", response_model=APIResponse)
async def root():
    return APIResponse(
        status="success",
        message="anharmonic oscillator spectra",
        data={"version": __version__, "families": [Family.QUARTIC.value, Family.SEXTIC.value], "tables": list(TABLE_NAMES)},
    )


@app.get("/health")
async def health_check():
    return {
        "status": "success",
        "message": "API is healthy",
        "data": {"version": __version__},
    }
