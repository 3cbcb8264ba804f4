"""
anharmonic: eigenenergies of quartic and sextic oscillators from Wronskian zeros

Usage:
    python -m anharmonic solve --family quartic --a2 -5 --count 4
    python -m anharmonic solve --family sextic --qes-s "(2+sqrt3)/4" --qes-j 2
    python -m anharmonic solve --sextic --a6 1 --am2 0.5 --count 2
    python -m anharmonic scan --family quartic --a2 -1 --e-min 0 --e-max 5 --step 0.1
    python -m anharmonic tables table1 --format json --output table1.json
    python -m anharmonic table2
    python -m anharmonic oracle --family quartic --a2 -1 --count 4
    python -m anharmonic compare --family sextic --a6 1 --am2 0.5 --sector regular
    python -m anharmonic serve --port 8000

Exit codes: 0 success, 1 solver failure or tolerance exceeded, 2 invalid input.
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

from dotenv import dotenv_values
from pydantic import ValidationError

from anharmonic import __version__
from anharmonic.config import configure_logging, settings
from anharmonic.exceptions import JobSpecError, SpectrumError
from anharmonic.jobs import run_compare, run_oracle, run_scan, run_solve
from anharmonic.models import Family, OutputFormat, Precision, Sector
from anharmonic.schemas import JobSpec, ResultSet
from anharmonic.tables import TABLE_NAMES, reference_table, reproduce_table
from anharmonic.utils.output import render, write_output
from anharmonic.utils.worker_pool import CellPool

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INVALID = 2

_BOOLEAN_TRUE = {"1", "true", "yes", "on"}


def load_config_file(path: Optional[str]) -> Dict[str, Any]:
    """KEY=value lines; keys mirror the long command-line flags."""
    if not path:
        return {}
    if not Path(path).is_file():
        raise JobSpecError(f"config file {path} not found")
    values = {}
    for key, value in dotenv_values(path).items():
        key = key.strip().lower().replace("-", "_")
        if value is None:
            continue
        if key == "no_meta":
            values["include_meta"] = value.strip().lower() not in _BOOLEAN_TRUE
            continue
        values[key] = value
    return values


def build_job(command: str, args: argparse.Namespace) -> JobSpec:
    """Config file first, then every flag the user actually gave."""
    merged = load_config_file(getattr(args, "config", None))
    for field in JobSpec.model_fields:
        value = getattr(args, field, None)
        if value is not None:
            merged[field] = value
    if getattr(args, "no_meta", False):
        merged["include_meta"] = False
    merged["command"] = command
    unknown = set(merged) - set(JobSpec.model_fields)
    if unknown:
        raise JobSpecError(f"unknown config keys: {', '.join(sorted(unknown))}")
    return JobSpec(**merged)


def _output_path(job: JobSpec) -> Optional[Path]:
    if job.output is None:
        return None
    if job.output.is_absolute():
        return job.output
    return settings.output_path / job.output


def emit(job: JobSpec, result: ResultSet) -> int:
    text = render(result.rows, result.meta, job.format, job.include_meta)
    write_output(text, _output_path(job))
    return EXIT_OK if result.ok else EXIT_FAILURE


def cmd_solve(args) -> int:
    job = build_job("solve", args)
    return emit(job, run_solve(job))


def cmd_scan(args) -> int:
    job = build_job("scan", args)
    return emit(job, run_scan(job.scan_request()))


def cmd_tables(args) -> int:
    job = build_job("tables", args)
    rows = reproduce_table(job.table, CellPool(args.workers), job.h_order)
    table = reference_table(job.table)
    meta = {
        "tool": f"anharmonic {__version__}",
        "table": job.table,
        "description": table["description"],
        "source": table["provenance"]["source"],
        "tolerance": table["provenance"]["tolerance"],
    }
    ok = all(row["within_tolerance"] for row in rows)
    if not ok:
        misses = [f"{r['parameter']}/{r['level']}" for r in rows if not r["within_tolerance"]]
        logger.warning("%s: %d values outside tolerance: %s", job.table, len(misses), ", ".join(misses))
    return emit(job, ResultSet(rows=rows, meta=meta, ok=ok))


def cmd_oracle(args) -> int:
    job = build_job("oracle", args)
    return emit(job, run_oracle(job))


def cmd_compare(args) -> int:
    job = build_job("compare", args)
    return emit(job, run_compare(job))


def cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("anharmonic.main:app", host=args.host, port=args.port, log_level=args.log_level.lower())
    return EXIT_OK


def _add_potential_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="KEY=value file with defaults for any flag below")
    family = parser.add_mutually_exclusive_group()
    family.add_argument("--family", choices=[Family.QUARTIC.value, Family.SEXTIC.value], help="Potential family (default: quartic)")
    family.add_argument("--quartic", dest="family", action="store_const", const=Family.QUARTIC.value, help="Same as --family quartic")
    family.add_argument("--sextic", dest="family", action="store_const", const=Family.SEXTIC.value, help="Same as --family sextic")
    parser.add_argument("--a6", type=float, help="Coefficient of r^6 (sextic)")
    parser.add_argument("--a4", type=float, help="Coefficient of r^4")
    parser.add_argument("--a2", type=float, help="Coefficient of r^2")
    parser.add_argument("--am2", type=float, help="Coefficient of r^-2")
    parser.add_argument("--qes-s", dest="qes_s", help="QES parameter s, e.g. '(2+sqrt3)/4'")
    parser.add_argument("--qes-j", dest="qes_j", help="QES parameter J, e.g. 2 or '-sqrt3/4'")
    parser.add_argument("--sector", choices=[s.value for s in Sector], help="even/odd/both (1D) or regular/other (radial)")
    parser.add_argument("--h-order", dest="h_order", type=int, help=f"h-series truncation (default: {settings.H_ORDER})")
    parser.add_argument("--b-order", dest="b_order", type=int, help="b-series truncation (default: automatic)")
    parser.add_argument("--reference-n", dest="reference_n", type=int, help=f"closed-form n (default: {settings.REFERENCE_N})")
    parser.add_argument("--precision", choices=[p.value for p in Precision], help="double or extended arithmetic")
    _add_output_arguments(parser)


def _add_output_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=[f.value for f in OutputFormat], help=f"Output format (default: {settings.OUTPUT_FORMAT})")
    parser.add_argument("--output", "-o", help="Output file (default: stdout)")
    parser.add_argument("--no-meta", dest="no_meta", action="store_true", help="Omit the metadata block")


def _add_window_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--e-min", dest="e_min", type=float, help="Lower end of the energy window")
    parser.add_argument("--e-max", dest="e_max", type=float, help="Upper end of the energy window")
    parser.add_argument("--step", type=float, help=f"Scan step (default: {settings.SCAN_STEP})")


def _add_table_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="KEY=value file with defaults")
    parser.add_argument("--h-order", dest="h_order", type=int, help="h-series truncation")
    parser.add_argument("--workers", type=int, default=settings.MAX_CONCURRENT_CELLS,
                        help="Worker processes (default: %(default)s)")
    _add_output_arguments(parser)
    parser.set_defaults(handler=cmd_tables)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="anharmonic",
        description="Eigenenergies of quartic and sextic anharmonic oscillators from Wronskian zeros",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=settings.LOG_LEVEL, help="Logging level (default: %(default)s)")
    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    # --- solve ---
    solve_parser = subparsers.add_parser("solve", help="Lowest eigenvalues of one potential")
    _add_potential_arguments(solve_parser)
    _add_window_arguments(solve_parser)
    solve_parser.add_argument("--count", type=int, help="Number of levels (default: 4)")
    solve_parser.add_argument("--tolerance", type=float, help="Fail when an estimated error exceeds this")
    solve_parser.set_defaults(handler=cmd_solve)

    # --- scan ---
    scan_parser = subparsers.add_parser("scan", help="Sample W(E) over an energy grid")
    _add_potential_arguments(scan_parser)
    _add_window_arguments(scan_parser)
    scan_parser.set_defaults(handler=cmd_scan)

    # --- tables, table1, table2 ---
    tables_parser = subparsers.add_parser("tables", help="Reproduce an embedded reference table")
    tables_parser.add_argument("table", choices=TABLE_NAMES)
    _add_table_arguments(tables_parser)
    for name in TABLE_NAMES:
        alias = subparsers.add_parser(name, help=f"Same as: tables {name}")
        _add_table_arguments(alias)
        alias.set_defaults(table=name)

    # --- oracle ---
    oracle_parser = subparsers.add_parser("oracle", help="Levels from the Numerov shooting solver")
    _add_potential_arguments(oracle_parser)
    oracle_parser.add_argument("--count", type=int, help="Number of levels (default: 4)")
    oracle_parser.add_argument("--grid-points", dest="grid_points", type=int, help="Numerov grid size")
    oracle_parser.add_argument("--r-max", dest="r_max", type=float, help="Outer end of the shooting domain")
    oracle_parser.set_defaults(handler=cmd_oracle)

    # --- compare ---
    compare_parser = subparsers.add_parser("compare", help="Wronskian zeros against the shooting solver")
    _add_potential_arguments(compare_parser)
    _add_window_arguments(compare_parser)
    compare_parser.add_argument("--count", type=int, help="Number of levels (default: 4)")
    compare_parser.add_argument("--tolerance", type=float, help="Allowed difference (default: 1e-6)")
    compare_parser.add_argument("--grid-points", dest="grid_points", type=int, help="Numerov grid size")
    compare_parser.set_defaults(handler=cmd_compare)

    # --- serve ---
    serve_parser = subparsers.add_parser("serve", help="Run the HTTP service")
    serve_parser.add_argument("--host", default="127.0.0.1")
    serve_parser.add_argument("--port", type=int, default=8000)
    serve_parser.set_defaults(handler=cmd_serve)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level)
    if not getattr(args, "handler", None):
        parser.print_help()
        return EXIT_INVALID

    handler: Callable[[argparse.Namespace], int] = args.handler
    try:
        return handler(args)
    except (JobSpecError, ValueError) as e:
        print(f"anharmonic: invalid input: {_one_line(e)}", file=sys.stderr)
        return EXIT_INVALID
    except SpectrumError as e:
        print(f"anharmonic: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_FAILURE


def _one_line(error: Exception) -> str:
    if isinstance(error, ValidationError):
        return "; ".join(f"{'.'.join(map(str, err['loc'])) or 'job'}: {err['msg']}" for err in error.errors())
    return str(error)


if __name__ == "__main__":
    sys.exit(main())
