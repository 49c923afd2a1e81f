"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line (run with ``pytest -s`` to see them inline).

Tolerances are fixed here and nowhere else; the supporting oracles
(Cramer-rule plane solve, finite differences, replay-by-hand robot
trajectories) are independent of the implementation paths they check.
"""

import math
import time

import numpy as np
import pytest

from handteleop.fsm import (
    ControlMode,
    FsmState,
    MoveDelta,
    SetMode,
    StartTracking,
    StopTracking,
    step,
)
from handteleop.geometry import Point3, Pose6D
from handteleop.metrics import compare, rmsd
from handteleop.mlp import (
    CLASS_ORDER,
    Gesture,
    TrainConfig,
    classify,
    init_params,
    loss_and_grads,
    train,
)
from handteleop.pose import Plane, fit_plane, plane_angle
from handteleop.session import SessionConfig, run_replay, write_replay_outputs
from handteleop.sim import TrajectorySample, apply_command, initial_state
from handteleop.synth import (
    facing_pose,
    frames_from_script,
    generate_synthetic_dataset,
    jitter_log,
    script_mode_move,
)
from handteleop.trajectory import Trajectory


def _check(name: str, ok: bool, detail: str = ""):
    tag = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"[{tag}] {name}{suffix}")
    assert ok, f"{name}{suffix}"


# --------------------------------------------------------------------------
# Plane fitting

def test_plane_fit_exactness():
    rng = np.random.default_rng(100)
    started = time.perf_counter()
    worst = 0.0
    for _ in range(100):
        a, b, c = rng.uniform(-3, 3, size=3)
        n = rng.integers(21, 60)
        xy = rng.uniform(-1, 1, size=(n, 2))
        cloud = np.column_stack([xy, a * xy[:, 0] + b * xy[:, 1] + c])
        plane = fit_plane(cloud)
        worst = max(worst, abs(plane.a - a), abs(plane.b - b), abs(plane.c - c))
    elapsed = time.perf_counter() - started
    _check(
        "plane-fit exactness on 100 noiseless planes",
        worst <= 1e-9 and elapsed < 1.0,
        f"max abs err {worst:.2e}, {elapsed * 1000:.0f} ms",
    )


def _cramer_oracle(pts):
    sxx = sxy = syy = sx = sy = sxz = syz = sz = 0.0
    for x, y, z in pts:
        sxx += x * x
        sxy += x * y
        syy += y * y
        sx += x
        sy += y
        sxz += x * z
        syz += y * z
        sz += z
    n = float(len(pts))
    m = [[sxx, sxy, sx], [sxy, syy, sy], [sx, sy, n]]
    v = [sxz, syz, sz]

    def det3(a):
        return (
            a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
        )

    d = det3(m)
    out = []
    for col in range(3):
        mm = [row[:] for row in m]
        for r in range(3):
            mm[r][col] = v[r]
        out.append(det3(mm) / d)
    return np.array(out)


def test_plane_fit_matches_independent_solver():
    rng = np.random.default_rng(101)
    worst = 0.0
    for _ in range(100):
        coeffs = rng.uniform(-2, 2, size=3)
        n = rng.integers(30, 120)
        xy = rng.uniform(-1, 1, size=(n, 2))
        z = coeffs[0] * xy[:, 0] + coeffs[1] * xy[:, 1] + coeffs[2]
        z += 0.05 * rng.normal(size=n)
        cloud = np.column_stack([xy, z])
        plane = fit_plane(cloud)
        got = np.array([plane.a, plane.b, plane.c])
        ref = _cramer_oracle(cloud)
        rel = np.max(np.abs(got - ref) / np.maximum(np.abs(ref), 1e-12))
        worst = max(worst, float(rel))
    _check(
        "plane-fit equivalence with dense normal-equation oracle",
        worst <= 1e-9,
        f"max rel err {worst:.2e}",
    )


def test_plane_angle_spot_values():
    self_angle = plane_angle(Plane(0.4, -1.2, 0.7), Plane(0.4, -1.2, 0.7))
    tilt = plane_angle(Plane(1, 0, 0), Plane(0, 0, 0))
    ortho = plane_angle(Plane(1, 0, 0), Plane(-1, 0, 3.0))
    ok = (
        self_angle == 0.0
        and abs(tilt - 45.0) <= 1e-9
        and abs(ortho - 90.0) <= 1e-9
    )
    _check(
        "inter-plane angle spot values (0, 45, 90 deg)",
        ok,
        f"self={self_angle}, tilt={tilt}, ortho={ortho}",
    )


# --------------------------------------------------------------------------
# RMSD

def test_rmsd_fixtures_and_scaling():
    rng = np.random.default_rng(102)
    ident = rmsd(np.arange(8.0), np.arange(8.0))
    hand = abs(rmsd([3.0, 4.0], [0.0, 0.0]) - math.sqrt(12.5))
    worst_scale = 0.0
    for _ in range(100):
        n = rng.integers(1, 50)
        a = rng.uniform(-100, 100, size=n)
        b = rng.uniform(-100, 100, size=n)
        k = rng.uniform(-20, 20)
        base = rmsd(a, b)
        scaled = rmsd(k * a, k * b)
        worst_scale = max(worst_scale, abs(scaled - abs(k) * base) / max(abs(k) * base, 1e-12))
    ok = ident == 0.0 and hand <= 1e-12 and worst_scale <= 1e-12
    _check(
        "RMSD fixtures and linear-scaling property",
        ok,
        f"sqrt(12.5) err {hand:.1e}, scaling rel err {worst_scale:.1e}",
    )


# --------------------------------------------------------------------------
# Classifier

def test_classifier_on_seeded_synthetic_dataset():
    started = time.perf_counter()
    dataset = generate_synthetic_dataset(seed=0, per_class=2500)
    result = train(dataset, split=0.75, config=TrainConfig(epochs=25, seed=0))
    elapsed = time.perf_counter() - started
    ok = (
        len(dataset) == 12500
        and result.train_count == 9375
        and result.test_count == 3125
        and result.test_accuracy >= 0.95
        and elapsed < 300.0
    )
    _check(
        "classifier: 12500-sample synthetic dataset, 9375/3125 split, >=95% held out",
        ok,
        f"test acc {result.test_accuracy:.4f}, {elapsed:.0f} s",
    )


def test_gradient_check_against_finite_differences():
    rng = np.random.default_rng(103)
    worst = 0.0
    eps = 1e-5
    for _ in range(10):
        params = init_params(int(rng.integers(1 << 30)))
        x = rng.normal(size=(10, 62))
        labels = rng.integers(0, 5, size=10)
        _, grads = loss_and_grads(params, x, labels)
        for name, grad in grads.items():
            tensor = getattr(params, name)
            flat, gflat = tensor.reshape(-1), grad.reshape(-1)
            for i in rng.choice(flat.size, size=min(8, flat.size), replace=False):
                orig = flat[i]
                flat[i] = orig + eps
                up, _ = loss_and_grads(params, x, labels)
                flat[i] = orig - eps
                down, _ = loss_and_grads(params, x, labels)
                flat[i] = orig
                numeric = (up - down) / (2 * eps)
                denom = max(abs(gflat[i]), abs(numeric), 1e-6)
                worst = max(worst, abs(gflat[i] - numeric) / denom)
    _check(
        "backprop matches central finite differences on 10 batches",
        worst <= 1e-4,
        f"max rel err {worst:.2e}",
    )


def test_rejection_rule():
    low = classify(np.array([0.84, 0.04, 0.04, 0.04, 0.04]))
    high = classify(np.array([0.90, 0.04, 0.02, 0.02, 0.02]))
    ok = low is Gesture.NONE and high is Gesture.ONE
    rng = np.random.default_rng(104)
    for _ in range(1000):
        raw = rng.uniform(size=5) ** rng.uniform(0.3, 4.0)
        probs = raw / raw.sum()
        got = classify(probs)
        peak = float(probs.max())
        if got is Gesture.NONE:
            ok = ok and peak < 0.85
        else:
            ok = ok and peak >= 0.85 and got is CLASS_ORDER[int(np.argmax(probs))]
    _check("rejection rule at the 0.85 threshold (1000 random vectors)", ok)


# --------------------------------------------------------------------------
# FSM scenarios and fuzz

P0 = facing_pose()


def _run(state, events):
    out = []
    for g, pose in events:
        state, cmd = step(state, g, pose)
        if cmd is not None:
            out.append(cmd)
    return state, out


def test_fsm_scenario_suite():
    moved = Pose6D(Point3(0.04, 0.0, 0.5), 0.0, 0.0, 0.0)
    rotated = Pose6D(Point3(0.0, 0.0, 0.5), 0.0, 15.0, 0.0)
    both = Pose6D(Point3(0.04, 0.0, 0.5), 0.0, 15.0, 0.0)

    ok = True
    for mode_gesture, mode, target, keep_lin, keep_ang in (
        (Gesture.ONE, ControlMode.LINEAR, moved, True, False),
        (Gesture.TWO, ControlMode.ANGULAR, rotated, False, True),
        (Gesture.THREE, ControlMode.COMBINED, both, True, True),
    ):
        events = (
            [(mode_gesture, P0)] * 3
            + [(Gesture.OPEN, P0)] * 3
            + [(Gesture.OPEN, target)] * 2
            + [(Gesture.CLOSE, target)] * 3
        )
        _, commands = _run(FsmState(), events)
        expected_len = 7  # SetMode, StartTracking, 4 MoveDeltas, StopTracking
        ok = ok and len(commands) == expected_len
        ok = ok and commands[0] == SetMode(mode)
        ok = ok and commands[1] == StartTracking(P0)
        ok = ok and commands[-1] == StopTracking()
        for cmd in commands[2:-1]:
            ok = ok and isinstance(cmd, MoveDelta)
            dx = cmd.delta.translation.x
            dry = cmd.delta.ry
            ok = ok and (abs(dx - 0.04) < 1e-12 if keep_lin else dx == 0.0)
            ok = ok and (abs(dry - 15.0) < 1e-12 if keep_ang else dry == 0.0)
    _check("FSM emits the documented command streams for all three modes", ok)


def test_fsm_and_workspace_fuzz():
    rng = np.random.default_rng(105)
    gestures = list(Gesture)
    state = FsmState()
    robot = initial_state()
    ok = True
    for i in range(100_000):
        g = gestures[rng.integers(len(gestures))]
        pose = Pose6D(
            Point3(*rng.uniform(-0.3, 0.3, size=3)),
            *rng.uniform(-170.0, 170.0, size=3),
        )
        was_tracking = state.tracking
        state, cmd = step(state, g, pose)
        if isinstance(cmd, MoveDelta) and not was_tracking:
            ok = False
            break
        if cmd is not None:
            robot = apply_command(robot, cmd, t=float(i))
            if not robot.limits.contains(robot.body):
                ok = False
                break
    _check("fuzz 1e5 steps: no untracked MoveDelta, body stays in limits", ok)


# --------------------------------------------------------------------------
# End to end

def _expected_trajectory(times, offset: Pose6D, mode: ControlMode,
                         hold=5, move=30, debounce=3):
    """Replay-by-hand oracle for script_mode_move sessions.

    Tracking starts at frame hold + debounce - 1; each ramp frame j sets
    the body to the masked fraction of the offset; Close leaves the body
    at the final offset.
    """
    limits = initial_state().limits
    rows = []
    off = offset.as_array()
    for i, t in enumerate(times):
        if i < 2 * hold:
            body = np.zeros(6)  # mode selection and anchor phases
        elif i < 2 * hold + move:
            frac = (i - 2 * hold + 1) / move
            body = off * frac
        else:
            body = off.copy()
        if mode is ControlMode.LINEAR:
            body[3:] = 0.0
        elif mode is ControlMode.ANGULAR:
            body[:3] = 0.0
        bounds = limits.bounds()
        body = np.clip(body, bounds[:, 0], bounds[:, 1])
        rows.append(TrajectorySample(t=t, pose=Pose6D.from_array(body)))
    return Trajectory.from_samples(rows)


def _session_logs():
    linear_end = facing_pose(x=0.05)
    angular_end = Pose6D(Point3(0.0, 0.0, 0.5), 0.0, 20.0, 0.0)
    linear = frames_from_script(script_mode_move(Gesture.ONE, linear_end))
    angular = frames_from_script(script_mode_move(Gesture.TWO, angular_end))
    return linear, angular


def test_end_to_end_round_trip(trained_params):
    linear_log, angular_log = _session_logs()
    config = SessionConfig()

    lin = run_replay(linear_log, trained_params, config)
    ang = run_replay(angular_log, trained_params, config)
    final_x = lin.summary["final_body"]["x"]
    final_ry = ang.summary["final_body"]["ry"]

    times_lin = [f.t for f in linear_log.frames]
    times_ang = [f.t for f in angular_log.frames]
    truth_lin = _expected_trajectory(
        times_lin, Pose6D(Point3(0.05, 0.0, 0.0), 0, 0, 0), ControlMode.LINEAR
    )
    truth_ang = _expected_trajectory(
        times_ang, Pose6D(Point3(0.0, 0.0, 0.0), 0, 20.0, 0), ControlMode.ANGULAR
    )
    clean_lin = compare(lin.trajectory, truth_lin)
    clean_ang = compare(ang.trajectory, truth_ang)

    noisy_log = jitter_log(linear_log, seed=0, px_sigma=1.0, depth_sigma=0.002)
    noisy_ang_log = jitter_log(angular_log, seed=1, px_sigma=1.0, depth_sigma=0.002)
    noisy_lin_report = compare(
        run_replay(noisy_log, trained_params, config).trajectory, truth_lin
    )
    noisy_ang_report = compare(
        run_replay(noisy_ang_log, trained_params, config).trajectory, truth_ang
    )

    ok = (
        abs(final_x - 0.05) <= 1e-6
        and abs(final_ry - 20.0) <= 0.5
        and clean_lin.linear_mm <= 0.1
        and clean_lin.angular_deg <= 0.1
        and clean_ang.linear_mm <= 0.1
        and clean_ang.angular_deg <= 0.1
        and noisy_lin_report.linear_mm <= 20.0
        and noisy_lin_report.angular_deg <= 5.0
        and noisy_ang_report.linear_mm <= 20.0
        and noisy_ang_report.angular_deg <= 5.0
    )
    _check(
        "end-to-end: +5 cm -> x=0.05 m, 20 deg -> ry=20, noiseless RMSD <= 0.1 mm/0.1 deg, "
        "noisy (1 px / 2 mm) <= 20 mm / 5 deg",
        ok,
        f"x={final_x:.8f}, ry={final_ry:.3f}, clean=({clean_lin.linear_mm:.2e} mm, "
        f"{clean_ang.angular_deg:.2e} deg), noisy=({noisy_lin_report.linear_mm:.2f} mm, "
        f"{noisy_ang_report.angular_deg:.2f} deg)",
    )


def test_replay_determinism(trained_params, tmp_path):
    log, _ = _session_logs()
    out_a = write_replay_outputs(run_replay(log, trained_params), tmp_path / "a")
    out_b = write_replay_outputs(run_replay(log, trained_params), tmp_path / "b")
    ok = all(
        open(out_a[k], "rb").read() == open(out_b[k], "rb").read()
        for k in ("commands", "trajectory", "summary")
    )
    _check("replay determinism: byte-identical command logs and trajectories", ok)
