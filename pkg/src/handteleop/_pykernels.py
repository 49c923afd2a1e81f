"""Numpy implementations of the hot pose kernels.

Drop-in fallback for the compiled ``_ckernels`` extension. Squared
distances are accumulated x, then y, then z so both backends compare
identical float64 values; neighbor ties break toward the lower index in
both. tests/test_kernels.py checks cross-backend agreement whenever the
extension is importable.
"""

from __future__ import annotations

import numpy as np


def knn_midpoint_round(points: np.ndarray, k: int) -> np.ndarray:
    """One densification round: midpoints between each point and its k
    nearest neighbors.

    Neighbors are ranked by squared distance, ties broken by lower index.
    Output rows are point-major, then by neighbor rank, so the round is
    fully deterministic.
    """
    pts = np.ascontiguousarray(points, dtype=np.float64)
    n = pts.shape[0]
    if not 1 <= k <= n - 1:
        raise ValueError(f"k must be in [1, {n - 1}], got {k}")
    x, y, z = pts[:, 0], pts[:, 1], pts[:, 2]
    d2 = (x[:, None] - x[None, :]) ** 2
    d2 += (y[:, None] - y[None, :]) ** 2
    d2 += (z[:, None] - z[None, :]) ** 2
    np.fill_diagonal(d2, np.inf)
    # Stable sort keeps equal distances in index order.
    neighbors = np.argsort(d2, axis=1, kind="stable")[:, :k]
    mids = 0.5 * (pts[:, None, :] + pts[neighbors])
    return mids.reshape(n * k, 3)


def plane_accumulate(points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Accumulate the 3x3 normal-equation matrix and right-hand side for
    the least-squares plane z = a*x + b*y + c.

    Returns (M, v) with M = sum over points of [x y 1]^T [x y 1] and
    v = sum of [x y 1]^T z.
    """
    pts = np.ascontiguousarray(points, dtype=np.float64)
    x, y, z = pts[:, 0], pts[:, 1], pts[:, 2]
    sx, sy, sn = x.sum(), y.sum(), float(pts.shape[0])
    sxx, sxy, syy = (x * x).sum(), (x * y).sum(), (y * y).sum()
    m = np.array(
        [[sxx, sxy, sx], [sxy, syy, sy], [sx, sy, sn]],
        dtype=np.float64,
    )
    v = np.array([(x * z).sum(), (y * z).sum(), z.sum()], dtype=np.float64)
    return m, v
