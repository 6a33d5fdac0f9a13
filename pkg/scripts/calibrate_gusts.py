"""Measure the peak-to-sigma ratio of the gust filter.

Runs the forming filter with unit stationary variance over many seeds and
reports the median peak gust-vector magnitude in a 60 s window. The value
feeds PEAK_TO_SIGMA_RATIO in probedock.turbulence; per-level sigmas are
derived from it so the median peak matches the target intensities.

Usage: python3 scripts/calibrate_gusts.py [n_seeds]
"""

import sys

import numpy as np

from probedock.turbulence import GUST_TIME_CONSTANT


def peak_magnitude(seed: int, duration: float = 60.0, dt: float = 0.01) -> float:
    rng = np.random.default_rng(seed)
    state = rng.standard_normal(3)
    decay = np.exp(-dt / GUST_TIME_CONSTANT)
    drive = np.sqrt(1.0 - decay * decay)
    steps = int(round(duration / dt))
    peak = 0.0
    for _ in range(steps):
        state = decay * state + drive * rng.standard_normal(3)
        peak = max(peak, float(np.linalg.norm(state)))
    return peak


def main() -> None:
    n_seeds = int(sys.argv[1]) if len(sys.argv) > 1 else 100
    peaks = np.array([peak_magnitude(seed) for seed in range(n_seeds)])
    print(f"seeds:   {n_seeds}")
    print(f"median:  {np.median(peaks):.4f}")
    print(f"min/max: {peaks.min():.4f} / {peaks.max():.4f}")
    print(f"p5/p95:  {np.percentile(peaks, 5):.4f} / {np.percentile(peaks, 95):.4f}")


if __name__ == "__main__":
    main()
