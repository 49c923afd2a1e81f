"""Trajectory comparison: root-mean-square deviation with time alignment.

The ground-truth timestamps are the alignment base; the estimated
trajectory is linearly interpolated onto them inside the overlapping
time range (angles interpolate along the shortest arc). Linear error is
reported in millimeters pooled over x/y/z, angular error in degrees
pooled over rx/ry/rz; pooling concatenates the per-axis difference
series before the RMSD, which differs numerically from averaging
per-axis RMSDs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import AlignmentError, DomainError, StructuralError
from .trajectory import Trajectory

M_TO_MM = 1000.0


def rmsd(estimated, observed) -> float:
    """sqrt(mean((estimated - observed)^2)) over equal-length series."""
    est = np.asarray(estimated, dtype=np.float64).ravel()
    obs = np.asarray(observed, dtype=np.float64).ravel()
    if est.shape != obs.shape:
        raise StructuralError(f"series lengths differ: {est.shape} vs {obs.shape}")
    if est.size == 0:
        raise DomainError("rmsd needs at least one sample")
    diff = est - obs
    return float(np.sqrt(np.mean(diff * diff)))


def _wrap_deg(a: np.ndarray) -> np.ndarray:
    """Elementwise wrap to (-180, 180]."""
    w = np.mod(a + 180.0, 360.0)
    w[w <= 0.0] += 360.0
    return w - 180.0


@dataclass(frozen=True)
class AlignedPair:
    """Pose series resampled onto shared timestamps."""

    times: np.ndarray
    estimated: np.ndarray  # (n, 6)
    truth: np.ndarray  # (n, 6)


def align(est: Trajectory, truth: Trajectory) -> AlignedPair:
    """Interpolate ``est`` onto the truth timestamps inside the overlap.

    Translation channels interpolate linearly; angle channels are
    unwrapped first so interpolation follows the shortest arc, then
    wrapped back to (-180, 180].
    """
    if len(est) == 0 or len(truth) == 0:
        raise AlignmentError("cannot align an empty trajectory")
    et, tt = est.times(), truth.times()
    t0, t1 = max(et[0], tt[0]), min(et[-1], tt[-1])
    if t0 > t1:
        raise AlignmentError(f"no time overlap: [{et[0]}, {et[-1]}] vs [{tt[0]}, {tt[-1]}]")
    mask = (tt >= t0) & (tt <= t1)
    if not mask.any():
        raise AlignmentError("no ground-truth samples inside the overlap")
    target = tt[mask]
    ev, tv = est.values(), truth.values()
    out = np.empty((target.size, 6), dtype=np.float64)
    for axis in range(3):
        out[:, axis] = np.interp(target, et, ev[:, axis])
    for axis in range(3, 6):
        unwrapped = np.unwrap(ev[:, axis], period=360.0)
        out[:, axis] = _wrap_deg(np.interp(target, et, unwrapped))
    return AlignedPair(times=target, estimated=out, truth=tv[mask])


@dataclass(frozen=True)
class RmsdReport:
    """Pooled deviation of an estimated trajectory from ground truth."""

    linear_mm: float
    angular_deg: float
    sample_count: int

    def __post_init__(self):
        if self.linear_mm < 0 or self.angular_deg < 0:
            raise DomainError("deviations cannot be negative")
        if self.sample_count < 1:
            raise DomainError("report needs at least one sample")

    def text(self) -> str:
        return (
            f"linear RMSD: {self.linear_mm:.6g} mm | "
            f"angular RMSD: {self.angular_deg:.6g} deg | "
            f"samples: {self.sample_count}"
        )

    def to_json(self) -> str:
        return json.dumps(
            {
                "linear_rmsd_mm": self.linear_mm,
                "angular_rmsd_deg": self.angular_deg,
                "sample_count": self.sample_count,
            },
            separators=(",", ":"),
        )


def compare(est: Trajectory, truth: Trajectory) -> RmsdReport:
    """Align and score two trajectories.

    Linear deviations pool x/y/z differences (in mm) into one series;
    angular deviations pool the wrapped rx/ry/rz differences (degrees).
    """
    pair = align(est, truth)
    linear_diff = (pair.estimated[:, :3] - pair.truth[:, :3]) * M_TO_MM
    angular_diff = _wrap_deg(pair.estimated[:, 3:] - pair.truth[:, 3:])
    zeros_lin = np.zeros_like(linear_diff)
    zeros_ang = np.zeros_like(angular_diff)
    return RmsdReport(
        linear_mm=rmsd(linear_diff.T.ravel(), zeros_lin.T.ravel()),
        angular_deg=rmsd(angular_diff.T.ravel(), zeros_ang.T.ravel()),
        sample_count=int(pair.times.size),
    )
