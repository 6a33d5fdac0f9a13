"""Figure regeneration for probedock CSV logs (post-processing only)."""

from .csvreader import SCHEMA_TAG, LogSchemaError, read_log
from .figures import (
    DEFAULT_COLUMNS,
    FigureSpec,
    bow_wave_figure,
    build_figure,
    controller_comparison_figure,
    plot_error_timeseries,
    turbulence_figure,
)

__all__ = [
    "DEFAULT_COLUMNS",
    "FigureSpec",
    "LogSchemaError",
    "SCHEMA_TAG",
    "bow_wave_figure",
    "build_figure",
    "controller_comparison_figure",
    "plot_error_timeseries",
    "read_log",
    "turbulence_figure",
]
