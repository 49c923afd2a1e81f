"""6-DoF hand pose from landmarks.

Translation is the 3D center of mass of the back-projected landmarks.
Orientation comes from densifying the landmarks into a point cloud
(k-NN midpoint insertion), least-squares fitting the plane
z = a*x + b*y + c through it, and reading angles off the plane normal
(a, b, -1); the in-plane twist is measured from a reference direction
(wrist toward the middle-finger base) projected into the plane.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import (
    DegenerateAxisError,
    DegenerateInputError,
    DegeneratePlaneError,
    DomainError,
    StructuralError,
    ValidationError,
)
from .geometry import CameraIntrinsics, Point3, Pose6D, wrap_angle_deg
from .landmarks import LANDMARK_COUNT, MIDDLE_MCP, WRIST, LandmarkFrame

DEFAULT_CLOUD_TARGET = 2000
DEFAULT_KNN = 3

# Relative eigenvalue floor below which the normal equations are treated
# as singular (collinear footprint or a near-vertical plane).
SINGULARITY_RTOL = 1e-12


@dataclass(frozen=True, slots=True)
class Plane:
    """The plane z = a*x + b*y + c; a, b are slopes, c the offset in meters."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        for name in ("a", "b", "c"):
            if not math.isfinite(getattr(self, name)):
                raise ValidationError(f"non-finite plane coefficient {name}")

    def normal(self) -> np.ndarray:
        """Unnormalized normal direction (a, b, -1)."""
        return np.array([self.a, self.b, -1.0], dtype=np.float64)


def _as_points_array(points, expected=None) -> np.ndarray:
    if isinstance(points, np.ndarray):
        arr = np.asarray(points, dtype=np.float64)
    else:
        arr = np.array(
            [p.as_array() if isinstance(p, Point3) else p for p in points],
            dtype=np.float64,
        )
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise StructuralError(f"expected an (n, 3) point array, got {arr.shape}")
    if expected is not None and arr.shape[0] != expected:
        raise StructuralError(f"expected {expected} points, got {arr.shape[0]}")
    if not np.isfinite(arr).all():
        raise ValidationError("non-finite point coordinates")
    return arr


def center_of_mass(points) -> Point3:
    """Unweighted per-coordinate mean of exactly 21 points."""
    arr = _as_points_array(points, expected=LANDMARK_COUNT)
    return Point3.from_array(arr.mean(axis=0))


def expand_cloud_knn(points, target: int = DEFAULT_CLOUD_TARGET, k: int = DEFAULT_KNN):
    """Densify a landmark set by repeated k-NN midpoint insertion.

    Rounds add, for every current point, the midpoints toward its k
    nearest neighbors; rounds repeat until the cloud holds at least
    ``target`` points. The input points are preserved as the first rows
    and insertion order is deterministic.
    """
    arr = _as_points_array(points)
    if target < arr.shape[0]:
        raise DomainError(f"target {target} below input size {arr.shape[0]}")
    if k < 1:
        raise DomainError("k must be at least 1")
    if bool((arr == arr[0]).all()):
        raise DegenerateInputError("all points coincide; no cloud to expand")
    cloud = arr
    while cloud.shape[0] < target:
        mids = kernels.knn_midpoint_round(cloud, min(k, cloud.shape[0] - 1))
        cloud = np.vstack([cloud, mids])
    return cloud


def fit_plane(cloud) -> Plane:
    """Least-squares plane through a cloud via the normal equations.

    Solves (A^T A) coeffs = A^T b with A rows [x y 1] and b = z. Raises
    DegeneratePlaneError when A^T A is singular within SINGULARITY_RTOL
    (collinear footprint, or a plane seen edge-on).
    """
    arr = _as_points_array(cloud)
    if arr.shape[0] < 3:
        raise StructuralError(f"plane fit needs at least 3 points, got {arr.shape[0]}")
    m, v = kernels.plane_accumulate(arr)
    eigvals = np.linalg.eigvalsh(m)
    if eigvals[-1] <= 0.0 or eigvals[0] < SINGULARITY_RTOL * eigvals[-1]:
        raise DegeneratePlaneError(
            "normal equations singular: collinear footprint or vertical plane"
        )
    a, b, c = np.linalg.solve(m, v)
    return Plane(float(a), float(b), float(c))


def plane_angle(p1: Plane, p2: Plane) -> float:
    """Angle in degrees between two planes, in [0, 90].

    The arccos of the absolute normalized dot product of the plane
    normals (a, b, -1), evaluated as atan2(|n1 x n2|, |n1 . n2|) which
    is exact at both ends of the range.
    """
    n1, n2 = p1.normal(), p2.normal()
    cross = float(np.linalg.norm(np.cross(n1, n2)))
    dot = abs(float(np.dot(n1, n2)))
    return math.degrees(math.atan2(cross, dot))


def plane_euler_angles(plane: Plane, in_plane_axis) -> tuple[float, float, float]:
    """Fixed-axis angles (rx, ry, rz) in degrees for an oriented plane.

    rx and ry are the complements of the angles between the plane and the
    reference planes y = 0 and x = 0, signed by the normal components:
    rx = asin(b / L), ry = asin(a / L) with L = |(a, b, -1)|. rz is the
    twist of ``in_plane_axis`` (projected into the plane) away from the
    projected camera +y axis, positive about the camera-facing normal.
    """
    n = plane.normal()
    length = float(np.linalg.norm(n))
    rx = math.degrees(math.asin(plane.b / length))
    ry = math.degrees(math.asin(plane.a / length))

    n_hat = n / length
    axis = in_plane_axis.as_array() if isinstance(in_plane_axis, Point3) else np.asarray(
        in_plane_axis, dtype=np.float64
    )
    w_p = axis - np.dot(axis, n_hat) * n_hat
    w_norm = float(np.linalg.norm(w_p))
    if w_norm < 1e-12 * max(1.0, float(np.linalg.norm(axis))):
        raise DegenerateAxisError("reference axis is parallel to the plane normal")
    y_axis = np.array([0.0, 1.0, 0.0])
    y_p = y_axis - np.dot(y_axis, n_hat) * n_hat
    toward_camera = -n_hat
    rz = math.degrees(
        math.atan2(float(np.dot(np.cross(y_p, w_p), toward_camera)), float(np.dot(y_p, w_p)))
    )
    return rx, ry, wrap_angle_deg(rz)


def relative_pose(current: Pose6D, reference: Pose6D) -> Pose6D:
    """Componentwise pose delta; angle differences wrap to (-180, 180]."""
    return Pose6D(
        current.translation - reference.translation,
        wrap_angle_deg(current.rx - reference.rx),
        wrap_angle_deg(current.ry - reference.ry),
        wrap_angle_deg(current.rz - reference.rz),
    )


def back_project_frame(frame: LandmarkFrame, intr: CameraIntrinsics) -> np.ndarray:
    """All 21 landmarks as camera-frame metric points, shape (21, 3)."""
    px = frame.pixels()
    z = frame.depths()
    x = (px[:, 0] - intr.cx) * z / intr.fx
    y = (px[:, 1] - intr.cy) * z / intr.fy
    return np.column_stack([x, y, z])


def estimate_pose(
    frame: LandmarkFrame,
    intr: CameraIntrinsics,
    cloud_target: int = DEFAULT_CLOUD_TARGET,
    knn_k: int = DEFAULT_KNN,
) -> Pose6D:
    """Full 6-DoF hand pose for one frame.

    Back-projects the landmarks, takes their center of mass as the
    translation, then densifies, fits the plane, and reads the angles
    with the wrist-to-middle-base direction as the in-plane reference.
    """
    pts = back_project_frame(frame, intr)
    com = center_of_mass(pts)
    cloud = expand_cloud_knn(pts, target=cloud_target, k=knn_k)
    plane = fit_plane(cloud)
    axis = pts[MIDDLE_MCP] - pts[WRIST]
    rx, ry, rz = plane_euler_angles(plane, axis)
    return Pose6D(com, rx, ry, rz)
