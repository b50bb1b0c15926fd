# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: joint-histogram counting and 1-NN labeling.

Contracts mirror ``bandselect._kernels_py`` exactly; the import-time
selector in ``bandselect.backend`` picks whichever is available.
"""

import numpy as np

cimport numpy as cnp

BACKEND_NAME = "compiled"


def joint_counts(const cnp.int32_t[::1] a, const cnp.int32_t[::1] b, int n_a, int n_b):
    """Co-occurrence counts of two aligned symbol vectors, (n_a, n_b) int64."""
    cdef Py_ssize_t i, n = a.shape[0]
    if b.shape[0] != n:
        raise ValueError("symbol vectors differ in length")
    counts_arr = np.zeros((n_a, n_b), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] counts = counts_arr
    for i in range(n):
        counts[a[i], b[i]] += 1
    return counts_arr


def nn_classify(const double[:, ::1] train_x, const cnp.int64_t[::1] train_y,
                const double[:, ::1] test_x):
    """1-NN labels for each test row; ties keep the lowest train-row index."""
    cdef Py_ssize_t n = train_x.shape[0]
    cdef Py_ssize_t d = train_x.shape[1]
    cdef Py_ssize_t m = test_x.shape[0]
    if test_x.shape[1] != d:
        raise ValueError("train and test column counts differ")
    out_arr = np.empty(m, dtype=np.int64)
    cdef cnp.int64_t[::1] out = out_arr
    cdef Py_ssize_t i, j, k, best_j
    cdef double dist, best, diff
    for i in range(m):
        best = -1.0
        best_j = 0
        for j in range(n):
            dist = 0.0
            for k in range(d):
                diff = test_x[i, k] - train_x[j, k]
                dist += diff * diff
            if best < 0.0 or dist < best:
                best = dist
                best_j = j
        out[i] = train_y[best_j]
    return out_arr
