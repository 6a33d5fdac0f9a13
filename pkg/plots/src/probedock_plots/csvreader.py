"""Reader for the simulator's CSV log interface.

This package deliberately talks to the simulator only through its published
CSV format: a ``# probedock-log v1`` schema line (optionally followed by
``| <provenance>``), one header row of column names, then numeric rows.
Anything that does not match is rejected before any figure work starts.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

SCHEMA_TAG = "probedock-log v1"


class LogSchemaError(ValueError):
    """The file is not a readable v1 simulator log."""


def read_log(path) -> tuple[dict[str, np.ndarray], str]:
    """Parse one log CSV into named float columns plus its provenance string."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise LogSchemaError(f"log file not found: {path}")
    lines = text.splitlines()
    if not lines or not lines[0].startswith("# "):
        raise LogSchemaError(f"{path}: missing the schema comment line")
    schema_line = lines[0][2:]
    tag, _, provenance = schema_line.partition(" | ")
    if tag.strip() != SCHEMA_TAG:
        raise LogSchemaError(
            f"{path}: schema {tag.strip()!r} does not match {SCHEMA_TAG!r}"
        )
    if len(lines) < 2:
        raise LogSchemaError(f"{path}: missing the column header row")
    names = lines[1].split(",")
    if "time" not in names:
        raise LogSchemaError(f"{path}: header has no 'time' column")
    body = [line for line in lines[2:] if line]
    if not body:
        raise LogSchemaError(f"{path}: no data rows")
    rows = []
    for i, line in enumerate(body, start=3):
        fields = line.split(",")
        if len(fields) != len(names):
            raise LogSchemaError(
                f"{path}: line {i} has {len(fields)} fields, header has {len(names)}"
            )
        try:
            rows.append([float(f) for f in fields])
        except ValueError:
            raise LogSchemaError(f"{path}: line {i} contains a non-numeric field")
    data = np.asarray(rows, dtype=float)
    return {name: data[:, j] for j, name in enumerate(names)}, provenance.strip()


def require_columns(columns: dict[str, np.ndarray], wanted, path) -> None:
    missing = [name for name in wanted if name not in columns]
    if missing:
        raise LogSchemaError(f"{path}: missing column(s) {', '.join(missing)}")
