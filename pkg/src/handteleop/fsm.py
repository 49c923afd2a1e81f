"""Gesture-driven control-mode state machine.

One/Two/Three select the linear, angular, or combined control mode; Open
anchors a reference pose and starts tracking; Close stops tracking
immediately (the mode is retained, so a later Open resumes it). While
tracking, every step emits a MoveDelta holding the gain-scaled,
mode-masked offset of the current hand pose from the reference.

Gesture-triggered transitions are debounced: the same gesture must be
classified on N consecutive frames (default 3) before it takes effect,
and it fires exactly once per run. While tracking, mode gestures and
further Opens are ignored (a classifier flicker must never silently
re-anchor the reference); re-anchoring is Close followed by Open.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional, Union

from .errors import ModeError, ParseError, ValidationError
from .geometry import Point3, Pose6D, wrap_angle_deg
from .mlp import Gesture
from .pose import relative_pose

DEFAULT_DEBOUNCE = 3


class ControlMode(Enum):
    IDLE = "idle"
    LINEAR = "linear"
    ANGULAR = "angular"
    COMBINED = "combined"

    @classmethod
    def from_name(cls, name: str) -> "ControlMode":
        for m in cls:
            if m.value == name:
                return m
        raise ValidationError(f"unknown control mode {name!r}")


MODE_GESTURES = {
    Gesture.ONE: ControlMode.LINEAR,
    Gesture.TWO: ControlMode.ANGULAR,
    Gesture.THREE: ControlMode.COMBINED,
}


@dataclass(frozen=True, slots=True)
class SetMode:
    mode: ControlMode


@dataclass(frozen=True, slots=True)
class StartTracking:
    reference: Pose6D


@dataclass(frozen=True, slots=True)
class StopTracking:
    pass


@dataclass(frozen=True, slots=True)
class MoveDelta:
    delta: Pose6D


Command = Union[SetMode, StartTracking, StopTracking, MoveDelta]


def mask_delta(delta: Pose6D, mode: ControlMode) -> Pose6D:
    """Zero the channels a control mode does not own.

    Linear keeps only translation, angular only the angles, combined
    passes the delta through. Masking is undefined in idle.
    """
    if mode is ControlMode.IDLE:
        raise ModeError("cannot mask a delta in idle mode")
    if mode is ControlMode.LINEAR:
        return Pose6D(delta.translation, 0.0, 0.0, 0.0)
    if mode is ControlMode.ANGULAR:
        return Pose6D(Point3(0.0, 0.0, 0.0), delta.rx, delta.ry, delta.rz)
    return delta


def _scale_delta(delta: Pose6D, linear_gain: float, angular_gain: float) -> Pose6D:
    return Pose6D(
        delta.translation.scaled(linear_gain),
        wrap_angle_deg(delta.rx * angular_gain),
        wrap_angle_deg(delta.ry * angular_gain),
        wrap_angle_deg(delta.rz * angular_gain),
    )


@dataclass(frozen=True, slots=True)
class FsmState:
    """Immutable automaton state; step() returns the successor."""

    mode: ControlMode = ControlMode.IDLE
    tracking: bool = False
    reference: Optional[Pose6D] = None
    pending_gesture: Gesture = Gesture.NONE
    pending_count: int = 0
    debounce_n: int = DEFAULT_DEBOUNCE
    linear_gain: float = 1.0
    angular_gain: float = 1.0

    def __post_init__(self):
        if self.debounce_n < 1:
            raise ValidationError("debounce must be at least 1")
        if self.tracking and self.reference is None:
            raise ValidationError("tracking requires a reference pose")
        if self.mode is ControlMode.IDLE and self.tracking:
            raise ValidationError("cannot track in idle mode")


def step(
    state: FsmState, gesture: Gesture, pose: Pose6D
) -> tuple[FsmState, Optional[Command]]:
    """Advance the automaton by one classified frame.

    Returns the successor state and at most one command: SetMode when a
    debounced mode gesture lands, StartTracking/StopTracking on Open and
    Close, and otherwise, while tracking, a MoveDelta with the masked,
    gain-scaled offset from the reference.
    """
    if gesture is Gesture.NONE:
        pending, count = Gesture.NONE, 0
    elif gesture is state.pending_gesture:
        pending, count = gesture, state.pending_count + 1
    else:
        pending, count = gesture, 1
    confirmed = pending if count == state.debounce_n else None

    new_state = replace(state, pending_gesture=pending, pending_count=count)
    command: Optional[Command] = None

    if confirmed in MODE_GESTURES and not state.tracking:
        mode = MODE_GESTURES[confirmed]
        if mode is not state.mode:
            new_state = replace(new_state, mode=mode)
            command = SetMode(mode)
    elif (
        confirmed is Gesture.OPEN
        and state.mode is not ControlMode.IDLE
        and not state.tracking
    ):
        new_state = replace(new_state, tracking=True, reference=pose)
        command = StartTracking(pose)
    elif confirmed is Gesture.CLOSE and state.tracking:
        new_state = replace(new_state, tracking=False, reference=None)
        command = StopTracking()

    if command is None and state.tracking:
        delta = _scale_delta(
            relative_pose(pose, state.reference), state.linear_gain, state.angular_gain
        )
        command = MoveDelta(mask_delta(delta, state.mode))
    return new_state, command


# --------------------------------------------------------------------------
# Command log records (JSON Lines)

def _pose_fields(pose: Pose6D) -> dict:
    t = pose.translation
    return {"x": t.x, "y": t.y, "z": t.z, "rx": pose.rx, "ry": pose.ry, "rz": pose.rz}


def _pose_from_fields(rec: dict) -> Pose6D:
    return Pose6D(
        Point3(float(rec["x"]), float(rec["y"]), float(rec["z"])),
        float(rec["rx"]),
        float(rec["ry"]),
        float(rec["rz"]),
    )


def command_to_json(t: float, command: Command) -> str:
    """One timestamped command-log record."""
    if isinstance(command, SetMode):
        payload = {"t": t, "cmd": "set_mode", "mode": command.mode.value}
    elif isinstance(command, StartTracking):
        payload = {"t": t, "cmd": "start_tracking", **_pose_fields(command.reference)}
    elif isinstance(command, StopTracking):
        payload = {"t": t, "cmd": "stop_tracking"}
    elif isinstance(command, MoveDelta):
        payload = {"t": t, "cmd": "move_delta", **_pose_fields(command.delta)}
    else:
        raise ValidationError(f"unknown command {command!r}")
    return json.dumps(payload, separators=(",", ":"))


def command_from_json(line: str) -> tuple[float, Command]:
    try:
        rec = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}") from exc
    if "t" not in rec or "cmd" not in rec:
        raise ParseError("missing field", field="t" if "t" not in rec else "cmd")
    t = float(rec["t"])
    kind = rec["cmd"]
    try:
        if kind == "set_mode":
            return t, SetMode(ControlMode.from_name(rec["mode"]))
        if kind == "start_tracking":
            return t, StartTracking(_pose_from_fields(rec))
        if kind == "stop_tracking":
            return t, StopTracking()
        if kind == "move_delta":
            return t, MoveDelta(_pose_from_fields(rec))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad {kind} payload: {exc}", field="cmd") from exc
    raise ParseError(f"unknown command kind {kind!r}", field="cmd")
