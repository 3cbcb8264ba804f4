import io
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

import pandas as pd

from anharmonic.models import OutputFormat

logger = logging.getLogger(__name__)

ENERGY_COLUMN = "E"
FULL_ENERGY_COLUMN = "E_full"


def format_energy(value: Optional[float]) -> str:
    if value is None:
        return ""
    text = f"{value:.8f}"
    return "0.00000000" if text == "-0.00000000" else text


def _csv_rows(rows: List[Dict[str, Any]]) -> pd.DataFrame:
    frame = pd.DataFrame(rows)
    if ENERGY_COLUMN in frame:
        frame[ENERGY_COLUMN] = frame[ENERGY_COLUMN].map(format_energy)
    if FULL_ENERGY_COLUMN in frame:
        frame[FULL_ENERGY_COLUMN] = frame[FULL_ENERGY_COLUMN].map(lambda v: "" if v is None else repr(v))
    return frame


def render(
    rows: List[Dict[str, Any]],
    meta: Dict[str, Any],
    fmt: OutputFormat = OutputFormat.CSV,
    include_meta: bool = True,
) -> str:
    if fmt == OutputFormat.JSON:
        payload_rows = []
        for row in rows:
            row = dict(row)
            if row.get(ENERGY_COLUMN) is not None:
                row[ENERGY_COLUMN] = round(row[ENERGY_COLUMN], 8)
            payload_rows.append(row)
        payload = {"meta": meta if include_meta else {}, "rows": payload_rows}
        return json.dumps(payload, indent=2, default=str) + "\n"

    buffer = io.StringIO()
    if include_meta:
        for key, value in meta.items():
            buffer.write(f"# {key}: {value}\n")
    if rows:
        _csv_rows(rows).to_csv(buffer, index=False, lineterminator="\n")
    return buffer.getvalue()


def write_output(text: str, path: Optional[Path] = None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)
    logger.info("wrote %s", path)
