# backend/app/persistence.py

from __future__ import annotations

import csv
import io
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from . import config

logger = logging.getLogger(__name__)

FLOAT_FORMAT = ".12g"


# -------------------------------
# Metadata helpers
# -------------------------------

def _clean_metadata(md: Dict) -> Dict:
    """
    Drop keys whose value is None or empty so headers and JSON stay
    stable between runs that differ only in unset options.
    """
    return {
        k: v
        for k, v in md.items()
        if v is not None and v != [] and v != {}
    }


def build_metadata(command: str, seed: Optional[int], tolerances: Optional[Dict[str, float]] = None, **extra) -> Dict:
    md = {
        "command": command,
        "seed": seed,
        "version": config.VERSION,
        "tolerance": tolerances or {},
    }
    md.update(extra)
    return _clean_metadata(md)


def _format_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, FLOAT_FORMAT)
    return str(value)


def _jsonable(value: Any) -> Any:
    if isinstance(value, float):
        return float(format(value, FLOAT_FORMAT))
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if hasattr(value, "item"):
        return _jsonable(value.item())
    return value


# -------------------------------------------------
#  Renderers
# -------------------------------------------------

def render_csv(
    columns: Sequence[str],
    rows: Sequence[Sequence[Any]],
    metadata: Dict,
    footer: Optional[Dict] = None,
) -> str:
    """
    '#'-prefixed metadata lines, a header row, then data. Tolerances are
    written one line per numeric column.
    """
    buf = io.StringIO()
    md = _clean_metadata(metadata)
    tolerances = md.pop("tolerance", {})
    for key, value in md.items():
        buf.write(f"# {key}: {_format_cell(value)}\n")
    for column, tol in tolerances.items():
        buf.write(f"# tolerance {column}: {_format_cell(tol)}\n")

    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_format_cell(v) for v in row])

    for key, value in _clean_metadata(footer or {}).items():
        buf.write(f"# {key}: {_format_cell(value)}\n")
    return buf.getvalue()


def render_json(
    columns: Sequence[str],
    rows: Sequence[Sequence[Any]],
    metadata: Dict,
    footer: Optional[Dict] = None,
) -> str:
    payload = {
        "metadata": _clean_metadata(metadata),
        "columns": list(columns),
        "rows": [dict(zip(columns, row)) for row in rows],
    }
    if footer:
        payload["footer"] = _clean_metadata(footer)
    return json.dumps(_jsonable(payload), indent=2, sort_keys=False) + "\n"


def render_document(document: Dict, metadata: Dict) -> str:
    """JSON for nested results (orbits, optimizer output) that are not tables."""
    payload = {"metadata": _clean_metadata(metadata), **document}
    return json.dumps(_jsonable(payload), indent=2) + "\n"


# -------------------------------------------------
#  Output
# -------------------------------------------------

def write_artifact(text: str, out: Optional[str]) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    logger.info("[ARTIFACT] written | path=%s | bytes=%d", path, len(text.encode("utf-8")))


def emit_table(
    columns: Sequence[str],
    rows: List[Sequence[Any]],
    metadata: Dict,
    fmt: str = "csv",
    out: Optional[str] = None,
    footer: Optional[Dict] = None,
) -> str:
    renderer = render_json if fmt == "json" else render_csv
    text = renderer(columns, rows, metadata, footer)
    write_artifact(text, out)
    return text
