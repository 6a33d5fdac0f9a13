"""Camera frame geometry and normalized-image kinematics.

Conventions used throughout the package:

* Tanker frame: x forward (flight direction), y right, z down. It translates
  with the tanker at constant trim speed, so trim-relative receiver states are
  directly positions/velocities in this frame.
* Camera frame: x right, y down, z along the optical axis (forward). The
  camera looks forward at the drogue, so a visible target has depth > 0.
* The fixed camera-from-tanker rotation is the axis permutation
  (x_cam, y_cam, z_cam) = (y_t, z_t, x_t).

Image coordinates are normalized (unit focal length): u = x/z, v = y/z.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BehindCameraError

# Axis permutation mapping tanker-frame vectors into the camera frame.
DEFAULT_FRAME_ROTATION = np.array(
    [
        [0.0, 1.0, 0.0],
        [0.0, 0.0, 1.0],
        [1.0, 0.0, 0.0],
    ]
)


def _as_vec3(value, name: str) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if arr.shape != (3,):
        raise ValueError(f"{name} must be a 3-vector, got shape {arr.shape}")
    return arr


@dataclass(frozen=True)
class CameraInstallation:
    """Where the camera (and probe tip) sits on the receiver.

    ``mount_offset`` is the offset the controllers believe in; the physical
    camera sits at ``mount_offset + mount_offset_error``. Both are resolved in
    the receiver frame, which coincides with the tanker frame axes here.
    """

    mount_offset: np.ndarray
    mount_offset_error: np.ndarray = field(default_factory=lambda: np.zeros(3))
    frame_rotation: np.ndarray = field(default_factory=lambda: DEFAULT_FRAME_ROTATION.copy())

    def __post_init__(self):
        object.__setattr__(self, "mount_offset", _as_vec3(self.mount_offset, "mount_offset"))
        object.__setattr__(
            self, "mount_offset_error", _as_vec3(self.mount_offset_error, "mount_offset_error")
        )
        rot = np.asarray(self.frame_rotation, dtype=float)
        if rot.shape != (3, 3):
            raise ValueError("frame_rotation must be 3x3")
        if not np.allclose(rot @ rot.T, np.eye(3), atol=1e-12) or not np.isclose(
            np.linalg.det(rot), 1.0, atol=1e-12
        ):
            raise ValueError("frame_rotation must be a proper rotation (orthogonal, det +1)")
        object.__setattr__(self, "frame_rotation", rot)

    @property
    def true_offset(self) -> np.ndarray:
        return self.mount_offset + self.mount_offset_error


@dataclass(frozen=True)
class ImagePoint:
    """Normalized image coordinates (x right, y down)."""

    x: float
    y: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y])


@dataclass(frozen=True)
class ImageError:
    """Image-plane regulation error relative to the convergence point."""

    e_x: float
    e_y: float

    def norm(self) -> float:
        return float(np.hypot(self.e_x, self.e_y))


@dataclass(frozen=True)
class RelativeGeometry:
    """Drogue position expressed in the camera frame."""

    position: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "position", _as_vec3(self.position, "position"))

    @property
    def depth(self) -> float:
        return float(self.position[2])


ORIGIN = ImagePoint(0.0, 0.0)


def relative_geometry(
    receiver_position, drogue_position, install: CameraInstallation
) -> RelativeGeometry:
    """Drogue position in the camera frame from tanker-frame positions.

    The physical camera sits at receiver + mount_offset + mount_offset_error;
    the receiver-to-tanker rotation is identity (attitude increments enter the
    model only through the velocity kinematics, not the frame chain).
    """
    receiver_position = _as_vec3(receiver_position, "receiver_position")
    drogue_position = _as_vec3(drogue_position, "drogue_position")
    camera = receiver_position + install.true_offset
    return RelativeGeometry(install.frame_rotation @ (drogue_position - camera))


def project(geometry: RelativeGeometry) -> ImagePoint:
    """Normalized pinhole projection; the drogue must be in front of the lens."""
    x, y, z = geometry.position
    if z <= 0.0:
        raise BehindCameraError(f"cannot project point at depth {z:.6g} (must be > 0)")
    return ImagePoint(float(x / z), float(y / z))


def image_error(point: ImagePoint, convergence: ImagePoint = ORIGIN) -> ImageError:
    """Error between the observed image point and the convergence point."""
    return ImageError(point.x - convergence.x, point.y - convergence.y)


def interaction_matrix(point: ImagePoint, depth: float) -> np.ndarray:
    """2x6 map from relative camera velocity (v, omega) to image-point rates.

    Rows (normalized coordinates x, y at depth z):

        [ -1/z   0    x/z   x*y     -(1+x^2)  y  ]
        [  0    -1/z  y/z   1+y^2   -x*y     -x  ]

    The translational half applies to the camera velocity relative to the
    target; the rotational half to the camera angular rate.
    """
    if depth <= 0.0:
        raise ValueError(f"interaction matrix undefined at depth {depth:.6g} (must be > 0)")
    x, y, z = point.x, point.y, depth
    return np.array(
        [
            [-1.0 / z, 0.0, x / z, x * y, -(1.0 + x * x), y],
            [0.0, -1.0 / z, y / z, 1.0 + y * y, -x * y, -x],
        ]
    )


def image_error_rate(
    error: ImageError, depth: float, linear_velocity, angular_velocity
) -> np.ndarray:
    """Image-error rates for a given relative velocity twist.

    Evaluates the interaction matrix at the error coordinates (convergence
    point at the image origin) and applies it to the stacked
    [linear_velocity, angular_velocity] twist.
    """
    v = _as_vec3(linear_velocity, "linear_velocity")
    w = _as_vec3(angular_velocity, "angular_velocity")
    L = interaction_matrix(ImagePoint(error.e_x, error.e_y), depth)
    return L @ np.concatenate([v, w])
