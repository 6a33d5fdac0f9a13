"""Receiver linear plant, actuator saturation, and camera-velocity kinematics.

The receiver is modeled as two decoupled trim-relative linear channels:

* longitudinal state  [along_track, altitude, pitch, airspeed, aoa, pitch_rate]
  driven by [elevator, throttle]
* lateral state       [cross_track, heading, roll, sideslip, roll_rate, yaw_rate]
  driven by [aileron, rudder]

All states are increments about a straight-and-level trim flown at the same
speed as the tanker, so the position states are directly tanker-frame relative
coordinates (altitude is up-positive while the tanker z axis points down).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DivergedError
from .frames import CameraInstallation, _as_vec3

# Indices into the channel state vectors, for readability at use sites.
LON_ALONG, LON_ALT, LON_PITCH, LON_SPEED, LON_AOA, LON_PITCHRATE = range(6)
LAT_CROSS, LAT_HEADING, LAT_ROLL, LAT_SIDESLIP, LAT_ROLLRATE, LAT_YAWRATE = range(6)

# Design-core state selections: the kinematic position integrals are excluded
# from gain synthesis (they are pure integrals of the regulated velocities and
# would make the integral augmentation structurally uncontrollable).
LON_CORE = (LON_PITCH, LON_SPEED, LON_AOA, LON_PITCHRATE)
LAT_CORE = (LAT_HEADING, LAT_ROLL, LAT_SIDESLIP, LAT_ROLLRATE, LAT_YAWRATE)


@dataclass(frozen=True)
class ActuatorLimits:
    """Saturation bounds. Surfaces are symmetric (rad); throttle is an
    increment about trim, clamped so total throttle stays inside [0, 1]."""

    elevator: float = np.deg2rad(25.0)
    aileron: float = np.deg2rad(25.0)
    rudder: float = np.deg2rad(25.0)
    throttle: tuple[float, float] = (-0.55, 0.45)

    def __post_init__(self):
        for name in ("elevator", "aileron", "rudder"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} limit must be positive")
        lo, hi = self.throttle
        if not (lo < 0.0 < hi):
            raise ValueError("throttle increment range must straddle zero")


@dataclass(frozen=True)
class ControlInput:
    """Actuator increments about trim: surfaces in rad, throttle unitless."""

    elevator: float = 0.0
    throttle: float = 0.0
    aileron: float = 0.0
    rudder: float = 0.0

    def saturate(self, limits: ActuatorLimits) -> tuple["ControlInput", bool]:
        """Clamped copy plus a flag telling whether anything was clipped."""
        lo, hi = limits.throttle
        clipped = ControlInput(
            elevator=float(np.clip(self.elevator, -limits.elevator, limits.elevator)),
            throttle=float(np.clip(self.throttle, lo, hi)),
            aileron=float(np.clip(self.aileron, -limits.aileron, limits.aileron)),
            rudder=float(np.clip(self.rudder, -limits.rudder, limits.rudder)),
        )
        saturated = clipped != self
        return clipped, saturated

    def lon(self) -> np.ndarray:
        return np.array([self.elevator, self.throttle])

    def lat(self) -> np.ndarray:
        return np.array([self.aileron, self.rudder])

    def as_array(self) -> np.ndarray:
        return np.array([self.elevator, self.throttle, self.aileron, self.rudder])


@dataclass
class ReceiverState:
    """Trim-relative receiver state, one 6-vector per channel."""

    lon: np.ndarray = field(default_factory=lambda: np.zeros(6))
    lat: np.ndarray = field(default_factory=lambda: np.zeros(6))

    def __post_init__(self):
        self.lon = np.asarray(self.lon, dtype=float)
        self.lat = np.asarray(self.lat, dtype=float)
        if self.lon.shape != (6,) or self.lat.shape != (6,):
            raise ValueError("channel states must be 6-vectors")

    def copy(self) -> "ReceiverState":
        return ReceiverState(self.lon.copy(), self.lat.copy())

    def position_increment(self) -> np.ndarray:
        """Tanker-frame receiver displacement [x, y, z] (z down, so -altitude)."""
        return np.array([self.lon[LON_ALONG], self.lat[LAT_CROSS], -self.lon[LON_ALT]])

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.lon)) and np.all(np.isfinite(self.lat)))


def _check_matrix(name: str, value, shape: tuple[int, int]) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if arr.shape != shape:
        raise ValueError(f"{name} must have shape {shape}, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def _pbh_stabilizable(A: np.ndarray, B: np.ndarray) -> tuple[bool, complex | None]:
    """PBH test over the closed right half plane (including the imaginary axis)."""
    n = A.shape[0]
    for lam in np.linalg.eigvals(A):
        if lam.real >= -1e-9:
            M = np.hstack([A - lam * np.eye(n), B])
            if np.linalg.matrix_rank(M, tol=1e-7) < n:
                return False, lam
    return True, None


def _has_complex_pair(A: np.ndarray, freq_band: tuple[float, float]) -> bool:
    eigs = np.linalg.eigvals(A)
    lo, hi = freq_band
    return bool(np.any((np.abs(eigs.imag) >= lo) & (np.abs(eigs.imag) <= hi)))


@dataclass(frozen=True)
class PlantModel:
    """Decoupled trim-relative channel models plus the output maps the
    controller believes in.

    The velocity output matrices are built from the controller-believed mount
    offset and the trim airspeed: measured camera velocity combines the
    rigid-body translation of the receiver with the mount lever arm.
    """

    a_lon: np.ndarray
    b_lon: np.ndarray
    a_lat: np.ndarray
    b_lat: np.ndarray
    trim_airspeed: float
    mount_offset: np.ndarray
    limits: ActuatorLimits = field(default_factory=ActuatorLimits)

    def __post_init__(self):
        object.__setattr__(self, "a_lon", _check_matrix("a_lon", self.a_lon, (6, 6)))
        object.__setattr__(self, "b_lon", _check_matrix("b_lon", self.b_lon, (6, 2)))
        object.__setattr__(self, "a_lat", _check_matrix("a_lat", self.a_lat, (6, 6)))
        object.__setattr__(self, "b_lat", _check_matrix("b_lat", self.b_lat, (6, 2)))
        object.__setattr__(self, "mount_offset", _as_vec3(self.mount_offset, "mount_offset"))
        if self.trim_airspeed <= 0:
            raise ValueError("trim_airspeed must be positive")
        for name, A, B in (("longitudinal", self.a_lon, self.b_lon),
                           ("lateral", self.a_lat, self.b_lat)):
            ok, lam = _pbh_stabilizable(A, B)
            if not ok:
                raise ValueError(
                    f"{name} pair (A, B) is not stabilizable: uncontrollable "
                    f"eigenvalue {lam:.4g}"
                )
        # Docking-relevant rigid-body modes must be oscillatory.
        if not _has_complex_pair(self.a_lon, (0.5, 8.0)):
            raise ValueError("longitudinal model lacks an oscillatory short-period mode")
        if not _has_complex_pair(self.a_lat, (0.5, 8.0)):
            raise ValueError("lateral model lacks an oscillatory Dutch-roll mode")

    def c_lon(self, offset: np.ndarray | None = None) -> np.ndarray:
        """2x6 map from the longitudinal state to measured camera (down,
        forward) velocity: climb/airspeed kinematics plus the pitch lever arm."""
        x_c, _, z_c = self.mount_offset if offset is None else _as_vec3(offset, "offset")
        V = self.trim_airspeed
        return np.array(
            [
                [0.0, 0.0, -V, 0.0, V, -x_c],
                [0.0, 0.0, 0.0, 1.0, 0.0, z_c],
            ]
        )

    def c_lat(self, offset: np.ndarray | None = None) -> np.ndarray:
        """1x6 map from the lateral state to measured camera right-velocity."""
        x_c, _, z_c = self.mount_offset if offset is None else _as_vec3(offset, "offset")
        V = self.trim_airspeed
        return np.array([[0.0, V, 0.0, V, -z_c, x_c]])

    def measured_camera_velocity(self, state: ReceiverState) -> np.ndarray:
        """Camera velocity in the reference frame per the controller's model,
        ordered (right, down, forward)."""
        v_down, v_fwd = self.c_lon() @ state.lon
        v_right = (self.c_lat() @ state.lat)[0]
        return np.array([v_right, v_down, v_fwd])


def rk4_lti_step(A: np.ndarray, B: np.ndarray, x: np.ndarray, u: np.ndarray, dt: float) -> np.ndarray:
    """One classical fixed-step RK4 step of dx/dt = A x + B u with u held."""
    bu = B @ u
    k1 = A @ x + bu
    k2 = A @ (x + 0.5 * dt * k1) + bu
    k3 = A @ (x + 0.5 * dt * k2) + bu
    k4 = A @ (x + dt * k3) + bu
    return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def step_receiver(
    state: ReceiverState, control: ControlInput, plant: PlantModel, dt: float
) -> ReceiverState:
    """Advance both channels one step under zero-order-hold actuator inputs."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    nxt = ReceiverState(
        rk4_lti_step(plant.a_lon, plant.b_lon, state.lon, control.lon(), dt),
        rk4_lti_step(plant.a_lat, plant.b_lat, state.lat, control.lat(), dt),
    )
    if not nxt.is_finite():
        raise DivergedError("receiver state became non-finite")
    return nxt


def camera_position(state: ReceiverState, install: CameraInstallation) -> np.ndarray:
    """Tanker-frame camera position from the receiver state, using the TRUE
    mount offset and the first-order attitude rotation of the lever arm.

    Keeping the rotation term makes this position an exact antiderivative of
    the lever-arm velocity terms in the plant's output rows.
    """
    offset = install.true_offset
    angles = np.array(
        [state.lat[LAT_ROLL], state.lon[LON_PITCH], state.lat[LAT_HEADING]]
    )
    return state.position_increment() + offset + np.cross(angles, offset)


def camera_velocity(
    state: ReceiverState, install: CameraInstallation, linearized: bool = False
) -> np.ndarray:
    """Camera velocity in the reference frame from the receiver's own motion
    states, ordered (right, down, forward). Uses the TRUE mount offset.

    The exact form keeps the flow-angle trigonometry of the trim-relative
    airspeed vector plus the full lever-arm cross product; ``linearized=True``
    drops the flow-angle products and keeps the forward-speed and lever-arm
    terms only (the small-signal map used in the controller derivation).
    """
    x_c, y_c, z_c = install.true_offset
    V = state.lon[LON_SPEED]
    alpha = state.lon[LON_AOA]
    q = state.lon[LON_PITCHRATE]
    beta = state.lat[LAT_SIDESLIP]
    p = state.lat[LAT_ROLLRATE]
    r = state.lat[LAT_YAWRATE]
    if linearized:
        return np.array(
            [
                x_c * r - z_c * p,
                -x_c * q,
                V + z_c * q,
            ]
        )
    return np.array(
        [
            V * np.sin(beta) + x_c * r - z_c * p,
            V * np.sin(alpha) * np.cos(beta) + y_c * p - x_c * q,
            V * np.cos(alpha) * np.cos(beta) + z_c * q - y_c * r,
        ]
    )
