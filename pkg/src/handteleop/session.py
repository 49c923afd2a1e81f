"""End-to-end operator session: classify, estimate, step, simulate.

A session owns one FSM and one simulated robot, shares immutable model
parameters, and processes frames strictly in order. ``run_replay`` runs
a whole landmark log through a fresh session and is a pure function of
its inputs, so repeated runs are byte-identical.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .errors import ParseError, ValidationError
from .fsm import DEFAULT_DEBOUNCE, Command, ControlMode, FsmState, command_to_json, step
from .geometry import CameraIntrinsics, Pose6D
from .landmarks import LandmarkFrame, LandmarkLog, extract_features, read_log_file, validate_bounds
from .metrics import RmsdReport, compare
from .mlp import Gesture, MlpParams, REJECT_THRESHOLD, classify, forward
from .pose import DEFAULT_CLOUD_TARGET, DEFAULT_KNN, estimate_pose
from .sim import RobotState, TrajectorySample, WorkspaceLimits, apply_command, initial_state, snapshot
from .trajectory import Trajectory, read_trajectory_file, write_trajectory_file


@dataclass(frozen=True)
class SessionConfig:
    """Tunables for one operator session."""

    threshold: float = REJECT_THRESHOLD
    debounce: int = DEFAULT_DEBOUNCE
    linear_gain: float = 1.0
    angular_gain: float = 1.0
    limits: WorkspaceLimits = field(default_factory=WorkspaceLimits)
    cloud_target: int = DEFAULT_CLOUD_TARGET
    knn_k: int = DEFAULT_KNN

    def __post_init__(self):
        if not 0.0 < self.threshold <= 1.0:
            raise ValidationError(f"threshold must be in (0, 1], got {self.threshold}")
        if self.debounce < 1:
            raise ValidationError("debounce must be at least 1")

    def merged(self, partial: dict) -> "SessionConfig":
        """New config with the given fields replaced; unknown keys raise."""
        known = {}
        for key, value in partial.items():
            if key == "limits":
                known["limits"] = _limits_from_dict(value)
            elif key in ("threshold", "linear_gain", "angular_gain"):
                known[key] = float(value)
            elif key in ("debounce", "cloud_target", "knn_k"):
                known[key] = int(value)
            else:
                raise ValidationError(f"unknown config field {key!r}")
        return replace(self, **known)


def _limits_from_dict(value: dict) -> WorkspaceLimits:
    fields = {}
    for axis in ("x", "y", "z", "rx", "ry", "rz"):
        if axis in value:
            lo, hi = value[axis]
            fields[axis] = (float(lo), float(hi))
    return WorkspaceLimits(**fields)


def load_config(path, **overrides) -> SessionConfig:
    """Config from a JSON file, with keyword overrides applied on top."""
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ParseError("config file must hold a JSON object")
    cfg = SessionConfig().merged(data)
    return cfg.merged({k: v for k, v in overrides.items() if v is not None})


@dataclass(frozen=True)
class StepResult:
    """Everything observable about one processed frame."""

    t: float
    gesture: Gesture
    probs: np.ndarray
    mode: ControlMode
    tracking: bool
    hand: Pose6D
    robot: Pose6D
    command: Optional[Command]


class Session:
    """Sequential frame processor; not safe for concurrent use."""

    def __init__(
        self,
        params: MlpParams,
        config: SessionConfig = SessionConfig(),
        intrinsics: Optional[dict[str, CameraIntrinsics]] = None,
    ):
        self.params = params
        self.config = config
        self.intrinsics = dict(intrinsics or {})
        self.fsm = FsmState(
            debounce_n=config.debounce,
            linear_gain=config.linear_gain,
            angular_gain=config.angular_gain,
        )
        self.robot = initial_state(limits=config.limits)

    def add_intrinsics(self, intr_id: str, intr: CameraIntrinsics) -> None:
        self.intrinsics[intr_id] = intr

    def reconfigure(self, partial: dict) -> None:
        """Apply a partial config; gains and debounce reach the FSM, and
        new workspace limits re-clamp the robot body.
        """
        self.config = self.config.merged(partial)
        self.fsm = replace(
            self.fsm,
            debounce_n=self.config.debounce,
            linear_gain=self.config.linear_gain,
            angular_gain=self.config.angular_gain,
        )
        if "limits" in partial:
            self.robot = RobotState(
                body=self.config.limits.clamp(self.robot.body),
                limits=self.config.limits,
                t=self.robot.t,
            )

    def process(self, frame: LandmarkFrame) -> StepResult:
        intr = self.intrinsics.get(frame.intrinsics_id)
        if intr is None:
            raise ParseError(f"undeclared intrinsics id {frame.intrinsics_id!r}", field="intr")
        validate_bounds(frame, intr)
        probs = forward(self.params, extract_features(frame))
        gesture = classify(probs, self.config.threshold)
        hand = estimate_pose(
            frame, intr, cloud_target=self.config.cloud_target, knn_k=self.config.knn_k
        )
        self.fsm, command = step(self.fsm, gesture, hand)
        self.robot = apply_command(self.robot, command, t=frame.t) if command else replace(
            self.robot, t=frame.t
        )
        return StepResult(
            t=frame.t,
            gesture=gesture,
            probs=probs,
            mode=self.fsm.mode,
            tracking=self.fsm.tracking,
            hand=hand,
            robot=self.robot.body,
            command=command,
        )


@dataclass(frozen=True)
class ReplayResult:
    commands: tuple[tuple[float, Command], ...]
    trajectory: Trajectory
    summary: dict


def run_replay(
    log: LandmarkLog, params: MlpParams, config: SessionConfig = SessionConfig()
) -> ReplayResult:
    """Feed every frame of a log through a fresh session, in order.

    Returns the emitted commands, one robot-pose sample per frame, and a
    summary. Deterministic: identical inputs produce identical results.
    """
    session = Session(params, config, intrinsics=log.intrinsics)
    commands: list[tuple[float, Command]] = []
    samples: list[TrajectorySample] = []
    gesture_counts: dict[str, int] = {}
    for frame in log.frames:
        result = session.process(frame)
        if result.command is not None:
            commands.append((frame.t, result.command))
        samples.append(snapshot(session.robot, t=frame.t))
        gesture_counts[result.gesture.value] = gesture_counts.get(result.gesture.value, 0) + 1
    trajectory = Trajectory.from_samples(samples)
    summary = {
        "frames": len(log.frames),
        "commands": len(commands),
        "gestures": dict(sorted(gesture_counts.items())),
        "final_mode": session.fsm.mode.value,
        "final_body": dict(
            zip(("x", "y", "z", "rx", "ry", "rz"), session.robot.body.as_array().tolist())
        ),
    }
    return ReplayResult(commands=tuple(commands), trajectory=trajectory, summary=summary)


def run_replay_file(log_path, params: MlpParams, config: SessionConfig = SessionConfig()):
    return run_replay(read_log_file(log_path), params, config)


def write_replay_outputs(result: ReplayResult, out_dir) -> dict:
    """Write commands.jsonl, trajectory.csv, and summary.json; returns paths."""
    import os

    os.makedirs(out_dir, exist_ok=True)
    paths = {
        "commands": os.path.join(out_dir, "commands.jsonl"),
        "trajectory": os.path.join(out_dir, "trajectory.csv"),
        "summary": os.path.join(out_dir, "summary.json"),
    }
    with open(paths["commands"], "w", encoding="utf-8") as fh:
        for t, command in result.commands:
            fh.write(command_to_json(t, command) + "\n")
    write_trajectory_file(result.trajectory, paths["trajectory"])
    with open(paths["summary"], "w", encoding="utf-8") as fh:
        json.dump(result.summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return paths


def _read_traj_with_context(path) -> Trajectory:
    try:
        return read_trajectory_file(path)
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}") from exc


def run_eval(est_path, truth_path) -> RmsdReport:
    """Compare a replayed trajectory against ground truth, with file
    context on parse errors.
    """
    return compare(_read_traj_with_context(est_path), _read_traj_with_context(truth_path))
