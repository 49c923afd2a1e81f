# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled pose kernels: k-NN midpoint densification and plane-fit sums.

Mirrors handteleop._pykernels; keep both in sync. Squared distances
accumulate x, then y, then z so comparisons agree bit-for-bit with the
numpy fallback.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

INF = float("inf")


def knn_midpoint_round(points, int k):
    """One densification round: midpoints between each point and its k
    nearest neighbors (ties broken by lower index; point-major output).
    """
    cdef cnp.ndarray[cnp.float64_t, ndim=2] pts = np.ascontiguousarray(
        points, dtype=np.float64
    )
    cdef Py_ssize_t n = pts.shape[0]
    if not 1 <= k <= n - 1:
        raise ValueError(f"k must be in [1, {n - 1}], got {k}")
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.empty((n * k, 3), dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] best_d = np.empty(k, dtype=np.float64)
    cdef cnp.ndarray[cnp.intp_t, ndim=1] best_j = np.empty(k, dtype=np.intp)
    cdef Py_ssize_t i, j, s, slot, row
    cdef double dx, dy, dz, d2, inf = INF
    for i in range(n):
        for s in range(k):
            best_d[s] = inf
            best_j[s] = -1
        for j in range(n):
            if j == i:
                continue
            dx = pts[i, 0] - pts[j, 0]
            dy = pts[i, 1] - pts[j, 1]
            dz = pts[i, 2] - pts[j, 2]
            d2 = dx * dx + dy * dy + dz * dz
            # Insertion keeps best_d sorted ascending; a strict < on equal
            # distances leaves the earlier (lower) index in place.
            if d2 < best_d[k - 1]:
                slot = k - 1
                while slot > 0 and d2 < best_d[slot - 1]:
                    best_d[slot] = best_d[slot - 1]
                    best_j[slot] = best_j[slot - 1]
                    slot -= 1
                best_d[slot] = d2
                best_j[slot] = j
        row = i * k
        for s in range(k):
            j = best_j[s]
            out[row + s, 0] = 0.5 * (pts[i, 0] + pts[j, 0])
            out[row + s, 1] = 0.5 * (pts[i, 1] + pts[j, 1])
            out[row + s, 2] = 0.5 * (pts[i, 2] + pts[j, 2])
    return out


def plane_accumulate(points):
    """Sums for the normal equations of the plane z = a*x + b*y + c:
    returns (M, v) with M = sum [x y 1]^T [x y 1], v = sum [x y 1]^T z.
    """
    cdef cnp.ndarray[cnp.float64_t, ndim=2] pts = np.ascontiguousarray(
        points, dtype=np.float64
    )
    cdef Py_ssize_t n = pts.shape[0]
    cdef double sxx = 0.0, sxy = 0.0, syy = 0.0, sx = 0.0, sy = 0.0
    cdef double sxz = 0.0, syz = 0.0, sz = 0.0
    cdef double x, y, z
    cdef Py_ssize_t i
    for i in range(n):
        x = pts[i, 0]
        y = pts[i, 1]
        z = pts[i, 2]
        sxx += x * x
        sxy += x * y
        syy += y * y
        sx += x
        sy += y
        sxz += x * z
        syz += y * z
        sz += z
    m = np.array([[sxx, sxy, sx], [sxy, syy, sy], [sx, sy, <double>n]], dtype=np.float64)
    v = np.array([sxz, syz, sz], dtype=np.float64)
    return m, v
