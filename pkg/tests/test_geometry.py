import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from handteleop.errors import DomainError, ValidationError
from handteleop.geometry import (
    CameraIntrinsics,
    Point3,
    Pose6D,
    euler_to_matrix,
    meters_to_pixels,
    pixel_to_meters,
    rotation_about_axis,
    wrap_angle_deg,
)

INTR = CameraIntrinsics(fx=500.0, fy=500.0, cx=320.0, cy=240.0, width=1000, height=1000)


def test_principal_point_maps_to_optical_axis():
    p = pixel_to_meters(320.0, 240.0, 1.0, INTR)
    assert (p.x, p.y, p.z) == (0.0, 0.0, 1.0)


def test_pixel_to_meters_direct_evaluation():
    # (820 - 320) * 1.0 / 500 = 1.0 exactly
    p = pixel_to_meters(820.0, 240.0, 1.0, INTR)
    assert p.x == pytest.approx(1.0, abs=0)
    assert p.y == 0.0
    assert p.z == 1.0


def test_back_projection_linear_in_depth():
    p1 = pixel_to_meters(400.0, 300.0, 1.0, INTR)
    p2 = pixel_to_meters(400.0, 300.0, 2.0, INTR)
    assert p2.x == pytest.approx(2 * p1.x, rel=1e-15)
    assert p2.y == pytest.approx(2 * p1.y, rel=1e-15)


def test_non_positive_depth_rejected():
    with pytest.raises(DomainError):
        pixel_to_meters(10.0, 10.0, 0.0, INTR)
    with pytest.raises(DomainError):
        pixel_to_meters(10.0, 10.0, -0.5, INTR)


@given(
    u=st.floats(0, 999),
    v=st.floats(0, 999),
    z=st.floats(0.05, 10.0),
)
def test_projection_round_trip_within_1e9_pixels(u, v, z):
    point = pixel_to_meters(u, v, z, INTR)
    u2, v2 = meters_to_pixels(point, INTR)
    assert abs(u2 - u) <= 1e-9
    assert abs(v2 - v) <= 1e-9


def test_intrinsics_invariants():
    with pytest.raises(ValidationError):
        CameraIntrinsics(fx=0.0, fy=500.0, cx=1.0, cy=1.0, width=10, height=10)
    with pytest.raises(ValidationError):
        CameraIntrinsics(fx=500.0, fy=500.0, cx=10.0, cy=1.0, width=10, height=10)


def test_wrap_angle_examples():
    assert wrap_angle_deg(340.0) == pytest.approx(-20.0)
    assert wrap_angle_deg(180.0) == 180.0
    assert wrap_angle_deg(-180.0) == 180.0
    assert wrap_angle_deg(0.0) == 0.0
    assert wrap_angle_deg(-540.0) == 180.0


@given(st.floats(-10_000, 10_000))
def test_wrap_angle_range_and_identity(a):
    w = wrap_angle_deg(a)
    assert -180.0 < w <= 180.0
    # Same angle modulo a full turn.
    assert math.isclose(math.cos(math.radians(a)), math.cos(math.radians(w)), abs_tol=1e-9)
    assert math.isclose(math.sin(math.radians(a)), math.sin(math.radians(w)), abs_tol=1e-9)


def test_pose_wraps_angles_on_construction():
    pose = Pose6D(Point3(0, 0, 0), 190.0, -190.0, 360.0)
    assert pose.rx == pytest.approx(-170.0)
    assert pose.ry == pytest.approx(170.0)
    assert pose.rz == pytest.approx(0.0)


def test_point_rejects_non_finite():
    with pytest.raises(ValidationError):
        Point3(float("nan"), 0.0, 0.0)


def test_euler_matrix_is_orthonormal():
    r = euler_to_matrix(31.0, -47.0, 112.0)
    assert np.allclose(r @ r.T, np.eye(3), atol=1e-12)
    assert np.linalg.det(r) == pytest.approx(1.0, abs=1e-12)


def test_rotation_about_axis_matches_euler_for_z():
    assert np.allclose(rotation_about_axis([0, 0, 1], 30.0), euler_to_matrix(0, 0, 30.0))


def test_rotation_about_axis_rejects_zero_axis():
    with pytest.raises(DomainError):
        rotation_about_axis([0, 0, 0], 10.0)
