"""Figure construction from simulator log CSVs.

One generic operation, ``plot_error_timeseries``, renders the image-error
traces of one or more runs; the named figure builders below bundle the
labels/titles for the three standard comparisons (turbulence levels, bow
wave, image- vs. position-feedback). Inputs are validated up front so a bad
spec never leaves a partial output file behind, and input CSVs are only ever
opened for reading.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .csvreader import read_log, require_columns

DEFAULT_COLUMNS = ("image_error_x", "image_error_y")
# One fixed style per trace kind so a figure is a pure function of its inputs.
_LINE_STYLES = ("-", "--")
_COLOR_CYCLE = ("C0", "C1", "C2", "C3", "C4", "C5")


@dataclass(frozen=True)
class FigureSpec:
    """What to plot: input logs, the columns to draw, labels, output path."""

    inputs: tuple
    output: Path
    title: str = ""
    labels: tuple = ()
    columns: tuple = DEFAULT_COLUMNS

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(Path(p) for p in self.inputs))
        object.__setattr__(self, "output", Path(self.output))
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "columns", tuple(self.columns))
        if not self.inputs:
            raise ValueError("FigureSpec needs at least one input CSV")
        if not self.columns:
            raise ValueError("FigureSpec needs at least one column to plot")
        if self.labels and len(self.labels) != len(self.inputs):
            raise ValueError(
                f"got {len(self.labels)} labels for {len(self.inputs)} inputs"
            )

    def resolved_labels(self) -> tuple:
        if self.labels:
            return self.labels
        return tuple(p.stem for p in self.inputs)


def build_figure(spec: FigureSpec):
    """Load, validate, and draw the spec; returns the open matplotlib figure.

    All inputs are read and checked before the figure is created, so schema
    or column failures cannot produce a truncated output later.
    """
    loaded = []
    for path in spec.inputs:
        columns, _ = read_log(path)
        require_columns(columns, ("time",) + spec.columns, path)
        loaded.append(columns)

    fig, ax = plt.subplots(figsize=(8.0, 4.5))
    for run_idx, (columns, label) in enumerate(zip(loaded, spec.resolved_labels())):
        color = _COLOR_CYCLE[run_idx % len(_COLOR_CYCLE)]
        for col_idx, name in enumerate(spec.columns):
            style = _LINE_STYLES[col_idx % len(_LINE_STYLES)]
            suffix = name.removeprefix("image_error_")
            ax.plot(
                columns["time"],
                columns[name],
                style,
                color=color,
                linewidth=1.2,
                label=f"{label} e_{suffix}" if suffix != name else f"{label} {name}",
            )
    ax.set_xlabel("time [s]")
    ax.set_ylabel("image error")
    ax.grid(True, alpha=0.3)
    if spec.title:
        ax.set_title(spec.title)
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    return fig


def plot_error_timeseries(spec: FigureSpec) -> Path:
    """Render the spec to its output path and return that path."""
    fig = build_figure(spec)
    try:
        spec.output.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(spec.output, dpi=120, metadata={"Software": "probedock-plots"})
    finally:
        plt.close(fig)
    return spec.output


def turbulence_figure(inputs, output, labels=("turbulence off", "level I", "level II")) -> FigureSpec:
    """Image tracking error across gust intensity levels."""
    return FigureSpec(
        inputs=tuple(inputs),
        output=output,
        title="Image tracking error under turbulence",
        labels=tuple(labels)[: len(tuple(inputs))],
    )


def bow_wave_figure(nominal_csv, bow_csv, output) -> FigureSpec:
    """Undisturbed run against the bow-wave run."""
    return FigureSpec(
        inputs=(nominal_csv, bow_csv),
        output=output,
        title="Image tracking error with the bow wave effect",
        labels=("nominal", "bow wave"),
    )


def controller_comparison_figure(ibvs_csv, pbvs_csv, output) -> FigureSpec:
    """Image-feedback against position-feedback under a camera mount error."""
    return FigureSpec(
        inputs=(ibvs_csv, pbvs_csv),
        output=output,
        title="Image tracking error under camera pose error",
        labels=("image feedback", "position feedback"),
    )
