"""Kinematic body-pose simulator with workspace clamping.

The simulated robot holds a single body pose expressed as an offset from
its neutral stance. MoveDelta commands position it at the clamped delta
(position control, not velocity); mode and tracking commands only
advance time. Default limits keep the body within a conservative
envelope for a ~0.3 m class quadruped: +/-0.10 m translation and
+/-25 degrees per axis.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import NamedTuple, Optional

import numpy as np

from .errors import ValidationError
from .fsm import Command, MoveDelta
from .geometry import Pose6D

DEFAULT_TRANSLATION_LIMIT = 0.10  # meters per axis
DEFAULT_ANGLE_LIMIT = 25.0  # degrees per axis


@dataclass(frozen=True, slots=True)
class WorkspaceLimits:
    """Per-axis closed intervals for (x, y, z, rx, ry, rz)."""

    x: tuple[float, float] = (-DEFAULT_TRANSLATION_LIMIT, DEFAULT_TRANSLATION_LIMIT)
    y: tuple[float, float] = (-DEFAULT_TRANSLATION_LIMIT, DEFAULT_TRANSLATION_LIMIT)
    z: tuple[float, float] = (-DEFAULT_TRANSLATION_LIMIT, DEFAULT_TRANSLATION_LIMIT)
    rx: tuple[float, float] = (-DEFAULT_ANGLE_LIMIT, DEFAULT_ANGLE_LIMIT)
    ry: tuple[float, float] = (-DEFAULT_ANGLE_LIMIT, DEFAULT_ANGLE_LIMIT)
    rz: tuple[float, float] = (-DEFAULT_ANGLE_LIMIT, DEFAULT_ANGLE_LIMIT)

    def __post_init__(self):
        for name in ("x", "y", "z", "rx", "ry", "rz"):
            lo, hi = getattr(self, name)
            if not lo < hi:
                raise ValidationError(f"{name} limits must satisfy min < max")

    def bounds(self) -> np.ndarray:
        """(6, 2) array of per-axis (lo, hi)."""
        return np.array(
            [self.x, self.y, self.z, self.rx, self.ry, self.rz], dtype=np.float64
        )

    def clamp(self, pose: Pose6D) -> Pose6D:
        b = self.bounds()
        return Pose6D.from_array(np.clip(pose.as_array(), b[:, 0], b[:, 1]))

    def contains(self, pose: Pose6D, tol: float = 0.0) -> bool:
        b = self.bounds()
        v = pose.as_array()
        return bool(((v >= b[:, 0] - tol) & (v <= b[:, 1] + tol)).all())


class TrajectorySample(NamedTuple):
    t: float
    pose: Pose6D


@dataclass(frozen=True, slots=True)
class RobotState:
    """Body pose (offset from neutral), limits, and the last command time."""

    body: Pose6D
    limits: WorkspaceLimits
    t: float

    def __post_init__(self):
        if not self.limits.contains(self.body):
            raise ValidationError("body pose outside workspace limits")


def initial_state(limits: Optional[WorkspaceLimits] = None, t: float = 0.0) -> RobotState:
    return RobotState(body=Pose6D.identity(), limits=limits or WorkspaceLimits(), t=t)


def apply_command(state: RobotState, command: Command, t: Optional[float] = None) -> RobotState:
    """Execute one command; clamping absorbs any out-of-range delta.

    MoveDelta positions the body at the clamped offset from neutral;
    other commands leave the body untouched. The state timestamp
    advances to ``t`` when given.
    """
    new_t = state.t if t is None else t
    if isinstance(command, MoveDelta):
        return replace(state, body=state.limits.clamp(command.delta), t=new_t)
    return replace(state, t=new_t)


def snapshot(state: RobotState, t: Optional[float] = None) -> TrajectorySample:
    """Timestamped copy of the current body pose."""
    return TrajectorySample(t=state.t if t is None else t, pose=state.body)
