"""Seeded gust generation for the docking scenarios.

Each axis of the gust vector is an independent first-order forming filter
(an Ornstein-Uhlenbeck process) driven by unit white noise, which is the
low-frequency core of the classic Dryden spectra. The filter is advanced
with its exact discretization, so statistics do not depend on the step
size and a given (level, seed) pair reproduces the same sequence bit for
bit on any platform with the same numpy generator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

# Correlation length of the gust field and the airspeed it was calibrated
# at; together they set the filter time constant tau = L / V.
GUST_LENGTH_SCALE = 200.0
CALIBRATION_AIRSPEED = 120.0
GUST_TIME_CONSTANT = GUST_LENGTH_SCALE / CALIBRATION_AIRSPEED


class TurbulenceLevel(Enum):
    OFF = "off"
    LEVEL_I = "level_I"
    LEVEL_II = "level_II"


# Target peak gust magnitudes: 5 ft/s for level I, 7 ft/s for level II.
PEAK_GUST_TARGET = {
    TurbulenceLevel.OFF: 0.0,
    TurbulenceLevel.LEVEL_I: 1.524,
    TurbulenceLevel.LEVEL_II: 2.1336,
}

# Stationary per-axis standard deviation for each level, set so the median
# (over seeds) of the peak gust-vector magnitude in a 60 s window at the
# calibration airspeed lands on the targets above. The ratio of peak to
# sigma was measured empirically over 100 seeds at dt = 0.01 s; rerun
# scripts/calibrate_gusts.py after touching the filter to refresh it.
PEAK_TO_SIGMA_RATIO = 3.8685
LEVEL_SIGMA = {
    level: target / PEAK_TO_SIGMA_RATIO for level, target in PEAK_GUST_TARGET.items()
}


def as_turbulence_level(value) -> TurbulenceLevel:
    if isinstance(value, TurbulenceLevel):
        return value
    try:
        return TurbulenceLevel(value)
    except ValueError:
        names = ", ".join(lv.value for lv in TurbulenceLevel)
        raise ValueError(f"unknown turbulence level {value!r}; expected one of {names}")


@dataclass
class TurbulenceModel:
    """Mutable per-scenario gust source.

    ``filter_state`` holds the three filter outputs (m/s). It starts unset
    and is drawn from the stationary distribution on first use, so the
    sequence is stationary from the first sample onward.
    """

    level: TurbulenceLevel = TurbulenceLevel.OFF
    seed: int = 0
    filter_state: np.ndarray | None = None
    _rng: np.random.Generator | None = field(default=None, repr=False)

    def __post_init__(self):
        self.level = as_turbulence_level(self.level)
        self.seed = int(self.seed)

    @property
    def sigma(self) -> float:
        return LEVEL_SIGMA[self.level]


def sample_gust(turbulence: TurbulenceModel, dt: float) -> np.ndarray:
    """Advance the forming filters one step and return the gust vector (m/s)."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    if turbulence.level is TurbulenceLevel.OFF:
        return np.zeros(3)
    if turbulence._rng is None:
        turbulence._rng = np.random.default_rng(turbulence.seed)
    sigma = turbulence.sigma
    if turbulence.filter_state is None:
        turbulence.filter_state = sigma * turbulence._rng.standard_normal(3)
    decay = np.exp(-dt / GUST_TIME_CONSTANT)
    drive = sigma * np.sqrt(1.0 - decay * decay)
    turbulence.filter_state = (
        decay * turbulence.filter_state + drive * turbulence._rng.standard_normal(3)
    )
    return turbulence.filter_state.copy()
