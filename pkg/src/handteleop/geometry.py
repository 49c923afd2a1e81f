"""Camera-frame geometry: points, poses, rotations, and the pinhole model.

Frame convention used throughout the package: x right, y down (image v
grows downward), z forward (depth, positive in front of the camera).
Angles are degrees in (-180, 180].

Orientation is a fixed-axis rotation triple (rx, ry, rz) applied about
the camera x, then y, then z axes. The sign of the y rotation is chosen
so that the triple round-trips with the plane-based recovery in
``handteleop.pose``: tilting a camera-facing surface so that its +x edge
moves away from the camera is a positive ry, tilting its +y edge away is
a positive rx, and an in-plane turn of the surface's reference direction
from +y toward -x is a positive rz.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ValidationError


def wrap_angle_deg(angle: float) -> float:
    """Wrap an angle in degrees to (-180, 180]."""
    w = math.fmod(angle + 180.0, 360.0)
    if w <= 0.0:
        w += 360.0
    return w - 180.0


@dataclass(frozen=True, slots=True)
class Point3:
    """A point or direction in meters."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        for name in ("x", "y", "z"):
            if not math.isfinite(getattr(self, name)):
                raise ValidationError(f"non-finite coordinate {name}")

    def __add__(self, other: "Point3") -> "Point3":
        return Point3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Point3") -> "Point3":
        return Point3(self.x - other.x, self.y - other.y, self.z - other.z)

    def scaled(self, factor: float) -> "Point3":
        return Point3(self.x * factor, self.y * factor, self.z * factor)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=np.float64)

    @classmethod
    def from_array(cls, arr) -> "Point3":
        x, y, z = (float(v) for v in arr)
        return cls(x, y, z)


@dataclass(frozen=True, slots=True)
class Pose6D:
    """Translation in meters plus fixed-axis Euler angles in degrees.

    Angles are wrapped to (-180, 180] on construction.
    """

    translation: Point3
    rx: float
    ry: float
    rz: float

    def __post_init__(self):
        for name in ("rx", "ry", "rz"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValidationError(f"non-finite angle {name}")
            object.__setattr__(self, name, wrap_angle_deg(v))

    @classmethod
    def identity(cls) -> "Pose6D":
        return cls(Point3(0.0, 0.0, 0.0), 0.0, 0.0, 0.0)

    @property
    def euler(self) -> tuple[float, float, float]:
        return (self.rx, self.ry, self.rz)

    def as_array(self) -> np.ndarray:
        """(x, y, z, rx, ry, rz) as float64."""
        t = self.translation
        return np.array([t.x, t.y, t.z, self.rx, self.ry, self.rz], dtype=np.float64)

    @classmethod
    def from_array(cls, arr) -> "Pose6D":
        x, y, z, rx, ry, rz = (float(v) for v in arr)
        return cls(Point3(x, y, z), rx, ry, rz)


@dataclass(frozen=True, slots=True)
class CameraIntrinsics:
    """Pinhole intrinsics; focal lengths and principal point in pixels."""

    fx: float
    fy: float
    cx: float
    cy: float
    width: int
    height: int

    def __post_init__(self):
        if not (self.fx > 0 and self.fy > 0):
            raise ValidationError("focal lengths must be positive")
        if not (0 <= self.cx < self.width):
            raise ValidationError("cx outside image width")
        if not (0 <= self.cy < self.height):
            raise ValidationError("cy outside image height")

    def contains(self, u: float, v: float) -> bool:
        return 0.0 <= u < self.width and 0.0 <= v < self.height


def pixel_to_meters(u: float, v: float, z: float, intr: CameraIntrinsics) -> Point3:
    """Back-project a pixel with known depth to camera-frame meters.

    x = (u - cx) * z / fx, y = (v - cy) * z / fy. Depth must be positive.
    """
    if z <= 0.0:
        raise DomainError(f"depth must be positive, got {z}")
    return Point3((u - intr.cx) * z / intr.fx, (v - intr.cy) * z / intr.fy, z)


def meters_to_pixels(point: Point3, intr: CameraIntrinsics) -> tuple[float, float]:
    """Forward pinhole projection; the inverse of :func:`pixel_to_meters`."""
    if point.z <= 0.0:
        raise DomainError(f"point behind the camera, z={point.z}")
    u = intr.fx * point.x / point.z + intr.cx
    v = intr.fy * point.y / point.z + intr.cy
    return u, v


def euler_to_matrix(rx: float, ry: float, rz: float) -> np.ndarray:
    """Rotation matrix for the package's fixed-axis (rx, ry, rz) triple.

    R = Rz(rz) @ Ry'(ry) @ Rx(rx), degrees. Rx and Rz are right-handed;
    Ry' carries the flipped sign noted in the module docstring so the
    triple round-trips with the plane-based pose recovery.
    """
    ax, ay, az = (math.radians(v) for v in (rx, ry, rz))
    cx_, sx = math.cos(ax), math.sin(ax)
    cy_, sy = math.cos(ay), math.sin(ay)
    cz, sz = math.cos(az), math.sin(az)
    rot_x = np.array([[1, 0, 0], [0, cx_, -sx], [0, sx, cx_]], dtype=np.float64)
    rot_y = np.array([[cy_, 0, -sy], [0, 1, 0], [sy, 0, cy_]], dtype=np.float64)
    rot_z = np.array([[cz, -sz, 0], [sz, cz, 0], [0, 0, 1]], dtype=np.float64)
    return rot_z @ rot_y @ rot_x


def rotation_about_axis(axis, angle_deg: float) -> np.ndarray:
    """Rodrigues rotation matrix about an arbitrary axis (right-handed)."""
    a = np.asarray(axis, dtype=np.float64)
    norm = float(np.linalg.norm(a))
    if norm == 0.0:
        raise DomainError("rotation axis must be nonzero")
    ux, uy, uz = a / norm
    theta = math.radians(angle_deg)
    c, s = math.cos(theta), math.sin(theta)
    k = np.array([[0, -uz, uy], [uz, 0, -ux], [-uy, ux, 0]], dtype=np.float64)
    return np.eye(3) + s * k + (1.0 - c) * (k @ k)
