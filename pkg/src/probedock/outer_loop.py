"""Outer-loop velocity-command laws.

Two interchangeable outer loops produce the same command type:

* image-based: proportional laws on the normalized image error, plus a
  depth-proportional closing command that brakes when the image error is
  large and never commands slower closing than a fixed floor;
* position-based: the same structure fed by an estimated 3D relative
  position instead of the image error, as a comparison baseline.

Sign convention: ``v_x``/``v_y`` are desired camera velocities (right,
down). ``v_z`` is the desired depth rate, so it is always negative while
closing; the scenario layer converts it into a forward-speed reference.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .frames import ImageError, RelativeGeometry


@dataclass(frozen=True)
class OuterLoopGains:
    """Proportional outer-loop gains.

    lateral/vertical scale the image error into sideways/vertical chase
    velocities. depth scales distance into closing speed, brake_x/brake_y
    trade closing speed against image error, and closing_floor (< 0) is the
    depth rate still commanded at contact.
    """

    lateral: float
    vertical: float
    depth: float
    brake_x: float
    brake_y: float
    closing_floor: float

    def __post_init__(self):
        for name in ("lateral", "vertical", "depth", "brake_x", "brake_y"):
            if getattr(self, name) <= 0:
                raise ValueError(f"gain {name} must be positive")
        if self.closing_floor >= 0:
            raise ValueError("closing_floor must be negative")


# Bundled presets: "table1" is the gentle default, "table2" the aggressive
# variant used for close-in disturbance runs.
GAIN_PRESETS = {
    "table1": OuterLoopGains(1.0, 2.0, 0.3, 3.0, 1.0, -0.5),
    "table2": OuterLoopGains(3.0, 3.0, 0.5, 5.0, 2.0, -0.5),
}


@dataclass(frozen=True)
class DesiredCameraVelocity:
    """Outer-loop command: lateral chase velocities plus a depth rate."""

    v_x: float
    v_y: float
    v_z: float

    def as_array(self) -> np.ndarray:
        return np.array([self.v_x, self.v_y, self.v_z])


def ibvs_outer(
    error: ImageError, depth: float, gains: OuterLoopGains
) -> DesiredCameraVelocity:
    """Image-error outer loop. ``depth`` may be non-positive near contact;
    the closing command is then pinned at the floor by the min-clamp."""
    v_z = min(
        -gains.depth * depth
        - gains.brake_x * abs(error.e_x)
        - gains.brake_y * abs(error.e_y),
        gains.closing_floor,
    )
    return DesiredCameraVelocity(
        v_x=gains.lateral * error.e_x,
        v_y=gains.vertical * error.e_y,
        v_z=v_z,
    )


def pbvs_outer(
    estimate: RelativeGeometry, gains: OuterLoopGains, reference_depth: float
) -> DesiredCameraVelocity:
    """Position-estimate outer loop with the same command structure.

    The estimate is normalized by a fixed ``reference_depth`` (the scenario
    uses the initial depth) rather than the current depth, keeping the law
    division-free along the approach.
    """
    if reference_depth <= 0:
        raise ValueError("reference_depth must be positive")
    e_x = estimate.position[0] / reference_depth
    e_y = estimate.position[1] / reference_depth
    v_z = min(
        -gains.depth * estimate.depth
        - gains.brake_x * abs(e_x)
        - gains.brake_y * abs(e_y),
        gains.closing_floor,
    )
    return DesiredCameraVelocity(
        v_x=gains.lateral * e_x,
        v_y=gains.vertical * e_y,
        v_z=v_z,
    )


def to_channel_references(command: DesiredCameraVelocity) -> tuple[np.ndarray, float]:
    """Split a camera-velocity command into (longitudinal pair, lateral scalar).

    The longitudinal channel owns the vertical and closing components; the
    lateral channel owns the sideways component.
    """
    return np.array([command.v_y, command.v_z]), command.v_x
