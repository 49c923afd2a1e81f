"""Timed pose trajectories and their CSV file format.

One row per sample: t,x,y,z,rx,ry,rz (seconds, meters, degrees), with a
header line. Values are written with repr precision so a read/write
cycle is byte-exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import ParseError, ValidationError
from .geometry import Pose6D
from .sim import TrajectorySample

CSV_HEADER = "t,x,y,z,rx,ry,rz"


@dataclass(frozen=True)
class Trajectory:
    """Time-ordered pose samples. May be empty (an idle replay); the
    metric operations require at least one sample and say so.
    """

    samples: tuple[TrajectorySample, ...]

    def __post_init__(self):
        times = [s.t for s in self.samples]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValidationError("trajectory timestamps must be strictly increasing")

    def __len__(self) -> int:
        return len(self.samples)

    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.samples], dtype=np.float64)

    def values(self) -> np.ndarray:
        """(n, 6) array of (x, y, z, rx, ry, rz)."""
        if not self.samples:
            return np.empty((0, 6), dtype=np.float64)
        return np.stack([s.pose.as_array() for s in self.samples])

    @classmethod
    def from_samples(cls, samples: Iterable[TrajectorySample]) -> "Trajectory":
        return cls(samples=tuple(samples))


def write_trajectory(traj: Trajectory) -> str:
    lines = [CSV_HEADER]
    for s in traj.samples:
        v = s.pose.as_array()
        lines.append(",".join(repr(float(x)) for x in (s.t, *v)))
    return "\n".join(lines) + "\n"


def write_trajectory_file(traj: Trajectory, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(write_trajectory(traj))


def read_trajectory(text: str) -> Trajectory:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != CSV_HEADER:
        raise ParseError(f"trajectory file must start with header {CSV_HEADER!r}")
    samples = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != 7:
            raise ParseError("expected 7 comma-separated values", line=lineno)
        try:
            t, *pose = (float(p) for p in parts)
        except ValueError as exc:
            raise ParseError(f"non-numeric value: {exc}", line=lineno) from exc
        samples.append(TrajectorySample(t=t, pose=Pose6D.from_array(pose)))
    return Trajectory.from_samples(samples)


def read_trajectory_file(path) -> Trajectory:
    with open(path, "r", encoding="utf-8") as fh:
        return read_trajectory(fh.read())
