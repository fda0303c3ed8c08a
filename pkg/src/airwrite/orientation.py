"""Arm-angle estimation from gravity and rotation of the x/y acceleration frame.

Sign conventions (everything else in the package derives from these):

* Device x points along the forearm toward the hand; device y points up
  through the watch face when the arm is horizontal; z is left/right.
* Gravity at arm elevation theta reads (-g0*sin(theta), -g0*cos(theta), 0),
  so arm-horizontal gravity is (0, -g0, 0) and theta = atan2(-gx_n, -gy_n).
* `rotate_frame` applies x' = x*cos(theta) + y*sin(theta),
  y' = -x*sin(theta) + y*cos(theta). Under these signs a pure up/down world
  motion ends up on the rotated y-axis alone, whatever the arm angle, and
  left/right motion stays on z untouched.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .errors import DataQualityWarning, DegenerateGravityError, IndeterminateAngleError
from .sensor_model import SensorSample, Vec3

_MIN_GRAVITY_NORM = 1e-6
_WRIST_ROLL_LIMIT = 0.3  # |g_z| / |g| beyond which the 2-D rotation model degrades


@dataclass(frozen=True)
class ArmAngle:
    """Arm elevation above the horizon, radians in (-pi, pi]."""

    theta: float


@dataclass(frozen=True)
class RotatedSample:
    """Acceleration after arm-angle cancellation.

    x is back/forth, y is up/down, z is left/right. Gravity is consumed by the
    rotation and not carried forward.
    """

    t_us: int
    accel: Vec3


def gravity_norm(g: Vec3) -> float:
    """Euclidean norm of the gravity vector."""
    return g.norm()


def normalize_gravity(g: Vec3) -> Vec3:
    """Scale gravity to unit norm; raises if the norm is degenerate."""
    n = g.norm()
    if n <= _MIN_GRAVITY_NORM:
        raise DegenerateGravityError(
            f"gravity norm {n:.3e} m/s^2 is too small to orient against"
        )
    return Vec3(g.x / n, g.y / n, g.z / n)


def arm_angle(g_normalized: Vec3) -> ArmAngle:
    """Arm elevation from unit-norm gravity.

    Raises IndeterminateAngleError when gravity lies wholly along z (the x/y
    projection vanishes, e.g. the wrist rolled a full quarter turn).
    """
    gx, gy = g_normalized.x, g_normalized.y
    if gx == 0.0 and gy == 0.0:
        raise IndeterminateAngleError("gravity has no x/y projection; arm angle undefined")
    if abs(g_normalized.z) > _WRIST_ROLL_LIMIT:
        # constant text so repeated warnings deduplicate per call site
        warnings.warn(
            f"wrist roll |g_z| exceeds {_WRIST_ROLL_LIMIT}; "
            "the planar rotation model may be inaccurate",
            DataQualityWarning,
            stacklevel=2,
        )
    return ArmAngle(math.atan2(-gx, -gy))


def angle_from_sample(sample: SensorSample) -> ArmAngle:
    """Convenience composition: normalize the sample's gravity and take the angle."""
    return arm_angle(normalize_gravity(sample.gravity))


def rotate_frame(sample: SensorSample, angle: ArmAngle) -> RotatedSample:
    """Cancel the arm angle out of the x/y acceleration plane; z passes through."""
    theta = angle.theta
    if not math.isfinite(theta):
        raise ValueError(f"rotation angle must be finite, got {theta}")
    c, s = math.cos(theta), math.sin(theta)
    a = sample.linear_accel
    return RotatedSample(
        sample.t_us,
        Vec3(a.x * c + a.y * s, -a.x * s + a.y * c, a.z),
    )
