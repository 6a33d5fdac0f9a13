"""Scenario orchestration: one docking run from config to log and outcome.

Per step the runner executes: true relative geometry, projection, image
error, outer law (image- or position-based), channel references, integrator
update, inner law, saturation, receiver step, drogue step. It terminates on
a depth-zero crossing, sustained visual loss, divergence, or the time limit.

Sign plumbing worth stating once: the outer loop's closing command is a
depth rate (negative while approaching), while the longitudinal channel
regulates the camera's forward velocity, so the runner negates that one
component when forming the inner-loop reference.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .config import ScenarioConfig
from .drogue import bow_wave_velocity, drogue_velocity
from .dynamics import (
    LON_SPEED,
    ControlInput,
    ReceiverState,
    camera_position,
    step_receiver,
)
from .errors import DivergedError
from .frames import DEFAULT_FRAME_ROTATION, CameraInstallation, ImageError, RelativeGeometry
from .inner_loop import IntegratorState, inner_control, synthesize_gains, update_integrator
from .outer_loop import ibvs_outer, pbvs_outer, to_channel_references
from .turbulence import TurbulenceModel, sample_gust

# Lateral misses beyond this multiple of the capture radius mean the probe
# never came close: the camera lost the target rather than overshot it.
VISUAL_LOSS_MISS_FACTOR = 10.0
# How long a blind spell (target behind the image plane) may last before the
# run is declared failed; the last command is held meanwhile.
BLIND_HOLD_LIMIT = 0.5

LOG_COLUMNS = (
    "time",
    "lon_along", "lon_alt", "lon_pitch", "lon_speed", "lon_aoa", "lon_pitch_rate",
    "lat_cross", "lat_heading", "lat_roll", "lat_sideslip", "lat_roll_rate", "lat_yaw_rate",
    "cmd_elevator_raw", "cmd_throttle_raw", "cmd_aileron_raw", "cmd_rudder_raw",
    "cmd_elevator", "cmd_throttle", "cmd_aileron", "cmd_rudder",
    "saturated",
    "image_error_x", "image_error_y",
    "depth",
    "desired_v_x", "desired_v_y", "desired_v_z",
    "measured_v_right", "measured_v_down", "measured_v_forward",
    "integ_v_down", "integ_v_forward", "integ_v_right",
    "gust_x", "gust_y", "gust_z",
    "drogue_x", "drogue_y", "drogue_z",
    "bow_wave_magnitude",
    "rel_x", "rel_y",
)


@dataclass
class SimLog:
    """Column store of one run, one row per control step on a uniform grid."""

    columns: dict

    def __post_init__(self):
        lengths = {len(v) for v in self.columns.values()}
        if set(self.columns) != set(LOG_COLUMNS):
            missing = set(LOG_COLUMNS) - set(self.columns)
            extra = set(self.columns) - set(LOG_COLUMNS)
            raise ValueError(f"log columns mismatch: missing {missing}, extra {extra}")
        if len(lengths) != 1:
            raise ValueError("log columns must share one length")
        time = self.columns["time"]
        if len(time) >= 3:
            steps = np.diff(time)
            if not np.allclose(steps, steps[0], atol=1e-12):
                raise ValueError("log time grid is not uniform")

    @classmethod
    def from_rows(cls, rows: list[tuple]) -> "SimLog":
        data = np.asarray(rows, dtype=float)
        return cls({name: data[:, i] for i, name in enumerate(LOG_COLUMNS)})

    def __len__(self) -> int:
        return len(self.columns["time"])

    def column(self, name: str) -> np.ndarray:
        if name not in self.columns:
            raise KeyError(f"unknown log column {name!r}")
        return self.columns[name]

    @property
    def time(self) -> np.ndarray:
        return self.columns["time"]

    @property
    def depth(self) -> np.ndarray:
        return self.columns["depth"]

    def image_error_norm(self) -> np.ndarray:
        return np.hypot(self.columns["image_error_x"], self.columns["image_error_y"])

    def saturation_fraction(self) -> float:
        return float(np.mean(self.columns["saturated"]))


FAILURE_REASONS = ("timeout", "overshoot", "visual_loss", "diverged")


@dataclass(frozen=True)
class DockingOutcome:
    """Contact classification for one run. miss/closing/time are NaN when no
    depth crossing happened."""

    success: bool
    miss_distance: float
    closing_speed: float
    time_of_contact: float
    failure_reason: str | None

    def __post_init__(self):
        if self.failure_reason is not None and self.failure_reason not in FAILURE_REASONS:
            raise ValueError(f"unknown failure reason {self.failure_reason!r}")
        if self.success and self.failure_reason is not None:
            raise ValueError("successful outcomes carry no failure reason")


def _crossing_outcome(log: SimLog, idx: int, capture_radius: float) -> DockingOutcome:
    depth = log.depth
    time = log.time
    frac = depth[idx] / (depth[idx] - depth[idx + 1])
    t_c = float(time[idx] + frac * (time[idx + 1] - time[idx]))
    rel_x = log.column("rel_x")
    rel_y = log.column("rel_y")
    miss_x = rel_x[idx] + frac * (rel_x[idx + 1] - rel_x[idx])
    miss_y = rel_y[idx] + frac * (rel_y[idx + 1] - rel_y[idx])
    miss = float(np.hypot(miss_x, miss_y))
    closing = float(-(depth[idx + 1] - depth[idx]) / (time[idx + 1] - time[idx]))
    if miss < capture_radius:
        return DockingOutcome(True, miss, closing, t_c, None)
    reason = "overshoot" if miss <= VISUAL_LOSS_MISS_FACTOR * capture_radius else "visual_loss"
    return DockingOutcome(False, miss, closing, t_c, reason)


def detect_docking(log: SimLog, capture_radius: float) -> DockingOutcome:
    """Classify the first decisive depth-zero crossing in a log.

    A crossing with a huge lateral miss that recovers (depth becomes positive
    again) within the blind-hold window is treated as a transient blind spell
    and skipped, mirroring the runner's own termination rule.
    """
    if len(log) == 0:
        raise ValueError("log is empty")
    if capture_radius <= 0:
        raise ValueError("capture_radius must be positive")
    depth = log.depth
    time = log.time
    for idx in np.nonzero((depth[:-1] > 0.0) & (depth[1:] <= 0.0))[0]:
        outcome = _crossing_outcome(log, int(idx), capture_radius)
        if outcome.failure_reason == "visual_loss":
            window = (time > time[idx + 1]) & (time <= outcome.time_of_contact + BLIND_HOLD_LIMIT)
            if np.any(depth[window] > 0.0):
                continue
        return outcome
    return DockingOutcome(False, math.nan, math.nan, math.nan, "timeout")


def _diverged_outcome() -> DockingOutcome:
    return DockingOutcome(False, math.nan, math.nan, math.nan, "diverged")


def run_scenario(config: ScenarioConfig) -> tuple[SimLog, DockingOutcome]:
    """Run one docking scenario to termination. Deterministic for a given
    config (the gust seed lives inside it)."""
    gain_set = synthesize_gains(config.plant, config.weights)
    bound = config.disturbance_speed_bound()
    if min(config.gains.lateral, config.gains.vertical) <= bound:
        warnings.warn(
            "outer chase gains do not dominate the disturbance speed bound "
            f"({bound:.3g} m/s); image-error decay is not guaranteed",
            stacklevel=2,
        )

    install_true = config.installation()
    install_believed = CameraInstallation(mount_offset=config.plant.mount_offset)
    rotation = install_true.frame_rotation
    turbulence = TurbulenceModel(level=config.turbulence_level, seed=config.turbulence_seed)
    drogue = config.drogue_model()
    drogue_pos = drogue.nominal_position.copy()

    state = ReceiverState()
    integ = IntegratorState()
    saturated_prev = False
    command = None
    reference_depth = None
    blind_time = 0.0
    rows: list[tuple] = []
    steps = int(round(config.max_duration / config.dt))
    dt = config.dt
    diverged = False

    for k in range(steps):
        true_cam = camera_position(state, install_true)
        rel = rotation @ (drogue_pos - true_cam)
        depth = float(rel[2])
        visible = depth > 0.0
        if visible:
            blind_time = 0.0
            error = ImageError(rel[0] / depth, rel[1] / depth)
            if config.controller == "ibvs":
                command = ibvs_outer(error, depth, config.gains)
            else:
                believed_cam = camera_position(state, install_believed)
                estimate = RelativeGeometry(rotation @ (drogue_pos - believed_cam))
                if reference_depth is None:
                    reference_depth = estimate.depth
                command = pbvs_outer(estimate, config.gains, reference_depth)
        else:
            # Target behind the image plane: hold the last command.
            error = ImageError(math.nan, math.nan)
        lon_ref, lat_ref = to_channel_references(command)
        desired_lon = np.array([lon_ref[0], -lon_ref[1]])
        measured = config.plant.measured_camera_velocity(state)
        integ = update_integrator(
            integ,
            (measured[1:], measured[0]),
            (desired_lon, lat_ref),
            dt,
            saturated_prev,
        )
        raw = inner_control(state, integ, gain_set)
        applied, saturated = raw.saturate(config.plant.limits)
        saturated_prev = saturated

        forward_speed = config.plant.trim_airspeed + state.lon[LON_SPEED]
        gust = sample_gust(turbulence, dt)
        drogue_vel_ref = drogue_velocity(drogue, true_cam, drogue_pos, gust, forward_speed)
        bow_magnitude = float(
            np.linalg.norm(bow_wave_velocity(drogue, true_cam, drogue_pos, forward_speed))
        )

        rows.append(
            (
                k * dt,
                *state.lon,
                *state.lat,
                *raw.as_array(),
                *applied.as_array(),
                float(saturated),
                error.e_x, error.e_y,
                depth,
                *command.as_array(),
                *measured,
                integ.q_lon[0], integ.q_lon[1], integ.q_lat,
                *gust,
                *drogue_pos,
                bow_magnitude,
                rel[0], rel[1],
            )
        )

        if not visible:
            blind_time += dt
            miss_now = float(np.hypot(rel[0], rel[1]))
            if miss_now <= VISUAL_LOSS_MISS_FACTOR * config.capture_radius:
                break
            if blind_time >= BLIND_HOLD_LIMIT:
                break

        try:
            state = step_receiver(state, applied, config.plant, dt)
        except DivergedError:
            diverged = True
            break
        drogue_pos = drogue_pos + dt * (rotation.T @ drogue_vel_ref)

    log = SimLog.from_rows(rows)
    outcome = _diverged_outcome() if diverged else detect_docking(log, config.capture_radius)
    return log, outcome


@dataclass(frozen=True)
class BatchSummary:
    """Aggregate of independent seeded runs. Aggregates depend only on the
    multiset of outcomes, never on seed order."""

    seeds: tuple
    outcomes: tuple
    errors: dict
    success_rate: float
    miss_mean: float
    miss_median: float
    miss_max: float


def run_batch(config: ScenarioConfig, seeds, on_result=None) -> BatchSummary:
    seeds = tuple(int(s) for s in seeds)
    if not seeds:
        raise ValueError("seeds must be non-empty")
    outcomes: list[DockingOutcome | None] = []
    errors: dict[int, str] = {}
    for seed in seeds:
        run_config = replace(config, turbulence_seed=seed)
        try:
            log, outcome = run_scenario(run_config)
            outcomes.append(outcome)
            if on_result is not None:
                on_result(run_config, log, outcome)
        except Exception as exc:  # per-seed failures must not sink the batch
            errors[seed] = f"{type(exc).__name__}: {exc}"
            outcomes.append(None)
    finished = [o for o in outcomes if o is not None]
    misses = np.array(
        [o.miss_distance for o in finished if np.isfinite(o.miss_distance)], dtype=float
    )
    n = len(outcomes)
    return BatchSummary(
        seeds=seeds,
        outcomes=tuple(outcomes),
        errors=errors,
        success_rate=sum(1 for o in finished if o.success) / n,
        miss_mean=float(np.mean(misses)) if misses.size else math.nan,
        miss_median=float(np.median(misses)) if misses.size else math.nan,
        miss_max=float(np.max(misses)) if misses.size else math.nan,
    )
