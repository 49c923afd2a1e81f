import numpy as np
import pytest

from handteleop.errors import ValidationError
from handteleop.fsm import MoveDelta, SetMode, StartTracking, StopTracking, ControlMode
from handteleop.geometry import Point3, Pose6D
from handteleop.sim import WorkspaceLimits, apply_command, initial_state, snapshot


def _delta(x=0.0, y=0.0, z=0.0, rx=0.0, ry=0.0, rz=0.0):
    return MoveDelta(Pose6D(Point3(x, y, z), rx, ry, rz))


def test_zero_delta_leaves_body_unchanged():
    state = initial_state()
    after = apply_command(state, _delta(), t=0.1)
    assert after.body == state.body
    assert after.t == 0.1


def test_large_delta_clamps_to_limits():
    state = initial_state()
    after = apply_command(state, _delta(x=10.0), t=0.1)
    assert after.body.translation.x == pytest.approx(0.10)


def test_default_angle_limits():
    state = initial_state()
    after = apply_command(state, _delta(ry=90.0), t=0.1)
    assert after.body.ry == pytest.approx(25.0)
    after = apply_command(state, _delta(ry=-90.0), t=0.2)
    assert after.body.ry == pytest.approx(-25.0)


def test_non_move_commands_leave_body():
    state = apply_command(initial_state(), _delta(x=0.05), t=0.1)
    for cmd in (SetMode(ControlMode.ANGULAR), StartTracking(Pose6D.identity()), StopTracking()):
        after = apply_command(state, cmd, t=0.2)
        assert after.body == state.body
        assert after.t == 0.2


def test_replay_by_hand_oracle():
    # Position control: the body equals the clamp of the last delta.
    deltas = [(0.02, 0.0), (0.07, 5.0), (0.5, 40.0), (-0.03, -10.0)]
    state = initial_state()
    for i, (dx, dry) in enumerate(deltas):
        state = apply_command(state, _delta(x=dx, ry=dry), t=float(i))
        expected_x = min(max(dx, -0.10), 0.10)
        expected_ry = min(max(dry, -25.0), 25.0)
        assert state.body.translation.x == pytest.approx(expected_x)
        assert state.body.ry == pytest.approx(expected_ry)


def test_custom_limits():
    limits = WorkspaceLimits(x=(-0.02, 0.02))
    state = initial_state(limits=limits)
    after = apply_command(state, _delta(x=0.05), t=0.1)
    assert after.body.translation.x == pytest.approx(0.02)


def test_limits_validation():
    with pytest.raises(ValidationError):
        WorkspaceLimits(x=(0.1, -0.1))


def test_body_never_exits_limits_fuzz():
    rng = np.random.default_rng(1)
    state = initial_state()
    for i in range(2000):
        cmd = _delta(*rng.uniform(-1, 1, size=3), *rng.uniform(-400, 400, size=3))
        state = apply_command(state, cmd, t=float(i))
        assert state.limits.contains(state.body)


def test_apply_command_is_memoryless():
    state = apply_command(initial_state(), _delta(x=0.05, ry=10.0), t=1.0)
    a = apply_command(state, _delta(x=0.01), t=2.0)
    b = apply_command(state, _delta(x=0.01), t=2.0)
    assert a == b
    # The previous body does not leak into the next delta.
    assert a.body.translation.x == pytest.approx(0.01)
    assert a.body.ry == pytest.approx(0.0)


def test_snapshot_timestamps_increase_without_commands():
    state = initial_state()
    s1 = snapshot(state, t=0.5)
    s2 = snapshot(state, t=0.6)
    assert s1.pose == s2.pose
    assert s1.t < s2.t


def test_fresh_state_snapshot_is_neutral():
    s = snapshot(initial_state())
    assert s.pose == Pose6D.identity()
    assert s.t == 0.0
