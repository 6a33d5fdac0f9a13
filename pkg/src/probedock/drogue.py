"""Drogue disturbance kinematics: gust coupling plus a bow-wave surrogate.

The drogue hangs at a nominal tanker-frame station and is pushed around by
two effects: ambient gusts (scaled by a coupling gain, since the hose-drogue
assembly filters the flow) and the receiver's bow wave, modeled as a radial
velocity field that shoves the drogue away from the approaching probe and
grows as the separation shrinks.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .frames import DEFAULT_FRAME_ROTATION, _as_vec3


@dataclass(frozen=True)
class BowWaveParams:
    """Radial repulsion felt by the drogue inside ``activation_radius``.

    Magnitude at separation d is
    ``strength * (1 - d/activation_radius)**decay_exponent * (forward_speed/trim_airspeed)``
    so it vanishes continuously at the activation boundary and is strongest
    at contact.
    """

    activation_radius: float = 4.0
    strength: float = 0.3
    decay_exponent: float = 1.0

    def __post_init__(self):
        if self.activation_radius <= 0:
            raise ValueError("activation_radius must be positive")
        if self.strength < 0:
            raise ValueError("strength must be non-negative")
        if self.decay_exponent <= 0:
            raise ValueError("decay_exponent must be positive")


@dataclass(frozen=True)
class DrogueModel:
    """Drogue station and disturbance couplings. ``bow_wave=None`` disables
    the bow-wave effect entirely."""

    nominal_position: np.ndarray
    gust_gain: float = 0.05
    bow_wave: BowWaveParams | None = None
    trim_airspeed: float = 120.0

    def __post_init__(self):
        object.__setattr__(
            self, "nominal_position", _as_vec3(self.nominal_position, "nominal_position")
        )
        if self.gust_gain < 0:
            raise ValueError("gust_gain must be non-negative")
        if self.trim_airspeed <= 0:
            raise ValueError("trim_airspeed must be positive")


def bow_wave_velocity(
    drogue: DrogueModel,
    probe_position: np.ndarray,
    drogue_position: np.ndarray,
    forward_speed: float,
) -> np.ndarray:
    """Tanker-frame drogue velocity induced by the probe's bow wave."""
    if drogue.bow_wave is None:
        return np.zeros(3)
    params = drogue.bow_wave
    offset = np.asarray(drogue_position, dtype=float) - np.asarray(probe_position, dtype=float)
    distance = float(np.linalg.norm(offset))
    if distance >= params.activation_radius:
        return np.zeros(3)
    magnitude = (
        params.strength
        * (1.0 - distance / params.activation_radius) ** params.decay_exponent
        * (forward_speed / drogue.trim_airspeed)
    )
    # The probe closes along +x, so the limit direction at zero separation
    # is straight ahead of it.
    direction = offset / distance if distance > 1e-12 else np.array([1.0, 0.0, 0.0])
    return magnitude * direction


def drogue_velocity(
    drogue: DrogueModel,
    probe_position: np.ndarray,
    drogue_position: np.ndarray,
    gust: np.ndarray,
    forward_speed: float,
) -> np.ndarray:
    """Drogue velocity in the reference (camera-aligned) frame."""
    tanker = drogue.gust_gain * np.asarray(gust, dtype=float) + bow_wave_velocity(
        drogue, probe_position, drogue_position, forward_speed
    )
    return DEFAULT_FRAME_ROTATION @ tanker
