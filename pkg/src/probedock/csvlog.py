"""CSV serialization of run logs: the package's external data interface.

Layout: one comment line carrying the schema tag and a provenance string,
then a header row naming every column, then one row per control step.
Formatting is fixed (no timestamps, no absolute paths, no locale effects)
so writing the same log twice yields identical bytes.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .errors import ConfigError
from .scenario import LOG_COLUMNS, SimLog

SCHEMA_TAG = "probedock-log v1"


def _format_value(name: str, value: float) -> str:
    if name == "time":
        return f"{value:.6f}"
    return f"{value:.12g}"


def render_log_csv(log: SimLog, provenance: str = "") -> str:
    """Render a log to CSV text. ``provenance`` describes how the run was
    produced (resolved flags, seed); it must not contain newlines."""
    if "\n" in provenance or "\r" in provenance:
        raise ValueError("provenance must be a single line")
    lines = [f"# {SCHEMA_TAG} | {provenance}".rstrip(" |") if provenance else f"# {SCHEMA_TAG}"]
    lines.append(",".join(LOG_COLUMNS))
    columns = [log.column(name) for name in LOG_COLUMNS]
    for row in zip(*columns):
        lines.append(",".join(_format_value(name, v) for name, v in zip(LOG_COLUMNS, row)))
    return "\n".join(lines) + "\n"


def write_log_csv(log: SimLog, path, provenance: str = "") -> None:
    Path(path).write_text(render_log_csv(log, provenance), encoding="utf-8", newline="\n")


def read_log_csv(path) -> tuple[SimLog, str]:
    """Parse a CSV produced by :func:`write_log_csv`.

    Returns the log and the provenance string. Refuses files whose schema
    tag is missing or different: silently misreading a foreign CSV would be
    worse than failing.
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines or not lines[0].startswith("# "):
        raise ConfigError(f"{path.name}: missing schema line, not a run log")
    head = lines[0][2:]
    tag, _, provenance = head.partition(" | ")
    if tag.strip() != SCHEMA_TAG:
        raise ConfigError(
            f"{path.name}: schema {tag.strip()!r} does not match expected {SCHEMA_TAG!r}"
        )
    if len(lines) < 2:
        raise ConfigError(f"{path.name}: missing header row")
    names = tuple(lines[1].split(","))
    if names != LOG_COLUMNS:
        raise ConfigError(f"{path.name}: column header does not match the v1 schema")
    data = np.array(
        [[float(cell) for cell in line.split(",")] for line in lines[2:] if line],
        dtype=float,
    )
    if data.size == 0:
        raise ConfigError(f"{path.name}: no data rows")
    log = SimLog({name: data[:, i] for i, name in enumerate(names)})
    return log, provenance
