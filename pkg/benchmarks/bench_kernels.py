#!/usr/bin/env python3
"""Benchmark the compiled pose kernels against the numpy fallback.

Times the k-NN midpoint round and the plane-fit accumulation at the
cloud sizes the pose pipeline actually visits (21 -> 84 -> 336 -> 1344),
plus one full per-frame pose estimate through each backend. Also checks
that both backends agree on the same inputs.

Usage: python3 benchmarks/bench_kernels.py [--quick]
"""

import argparse
import time

import numpy as np

from handteleop import _pykernels

try:
    from handteleop import _ckernels
except ImportError:
    _ckernels = None


def _time(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_round(sizes, repeats):
    rng = np.random.default_rng(0)
    rows = []
    for n in sizes:
        pts = rng.normal(size=(n, 3)) * 0.1
        py = _time(lambda: _pykernels.knn_midpoint_round(pts, 3), repeats)
        if _ckernels is not None:
            cy = _time(lambda: _ckernels.knn_midpoint_round(pts, 3), repeats)
            assert np.array_equal(
                _pykernels.knn_midpoint_round(pts, 3), _ckernels.knn_midpoint_round(pts, 3)
            ), f"backends disagree at n={n}"
        else:
            cy = float("nan")
        rows.append((f"knn_midpoint_round n={n}", py, cy))
    return rows


def bench_accumulate(repeats):
    rng = np.random.default_rng(1)
    pts = rng.normal(size=(5376, 3)) * 0.1
    py = _time(lambda: _pykernels.plane_accumulate(pts), repeats)
    if _ckernels is not None:
        cy = _time(lambda: _ckernels.plane_accumulate(pts), repeats)
        m_py, v_py = _pykernels.plane_accumulate(pts)
        m_cy, v_cy = _ckernels.plane_accumulate(pts)
        assert np.allclose(m_py, m_cy, rtol=1e-12) and np.allclose(v_py, v_cy, rtol=1e-12)
    else:
        cy = float("nan")
    return [("plane_accumulate n=5376", py, cy)]


def bench_full_pose(repeats):
    from handteleop.geometry import Pose6D, Point3
    from handteleop.synth import DEFAULT_INTRINSICS, make_frame
    from handteleop.mlp import Gesture
    from handteleop import kernels, pose

    frame = make_frame(Gesture.OPEN, Pose6D(Point3(0.0, 0.0, 0.5), 5.0, -10.0, 15.0))
    rows = []
    for name, impl in (("python", _pykernels), ("compiled", _ckernels)):
        if impl is None:
            rows.append(("estimate_pose (full frame)", float("nan"), float("nan")))
            continue
        kernels.knn_midpoint_round = impl.knn_midpoint_round
        kernels.plane_accumulate = impl.plane_accumulate
        t = _time(lambda: pose.estimate_pose(frame, DEFAULT_INTRINSICS), repeats)
        rows.append((f"estimate_pose via {name}", t, None))
    # Restore the import-time selection.
    from importlib import reload

    reload(kernels)
    return rows


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--quick", action="store_true", help="fewer repeats")
    args = parser.parse_args()
    repeats = 3 if args.quick else 10

    print(f"compiled extension available: {_ckernels is not None}\n")
    header = f"{'kernel':38s} {'numpy':>12s} {'compiled':>12s} {'speedup':>9s}"
    print(header)
    print("-" * len(header))
    for name, py, cy in bench_round((21, 84, 336, 1344), repeats) + bench_accumulate(repeats):
        ratio = f"{py / cy:8.1f}x" if cy == cy and cy > 0 else "      n/a"
        cy_text = f"{cy * 1e3:10.3f} ms" if cy == cy else "       n/a"
        print(f"{name:38s} {py * 1e3:10.3f} ms {cy_text} {ratio}")
    print()
    for name, t, _ in bench_full_pose(repeats):
        if t == t:
            print(f"{name:38s} {t * 1e3:10.3f} ms/frame ({1 / t:7.1f} fps)")


if __name__ == "__main__":
    main()
