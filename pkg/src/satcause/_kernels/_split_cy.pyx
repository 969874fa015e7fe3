# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: split scans and tree traversal.

Mirrors split_py expression-for-expression so both backends round floats
identically. See split_py for the derivation of the scan statistics.
"""

import numpy as np

cimport numpy as cnp


def best_split_gini(const double[::1] values, const double[::1] ones):
    cdef Py_ssize_t m = values.shape[0]
    cdef Py_ssize_t i
    cdef double total1 = 0.0
    cdef double l1, l0, r1, r0, di, dr, s
    cdef double best_s = 0.0, best_thr = 0.0
    cdef bint found = False

    if m < 2:
        return -1.0, float("nan")
    total1 = 0.0
    for i in range(m):
        total1 += ones[i]
    l1 = 0.0
    for i in range(1, m):
        l1 += ones[i - 1]
        if not (values[i] > values[i - 1]):
            continue
        di = <double> i
        dr = <double> (m - i)
        l0 = di - l1
        r1 = total1 - l1
        r0 = dr - r1
        s = (l1 * l1 + l0 * l0) / di + (r1 * r1 + r0 * r0) / dr
        if (not found) or s > best_s:
            found = True
            best_s = s
            best_thr = 0.5 * (values[i - 1] + values[i])
            if best_thr >= values[i]:  # midpoint rounded up; keep right non-empty
                best_thr = values[i - 1]
    if not found:
        return -1.0, float("nan")
    return best_s, best_thr


def best_split_sse(const double[::1] values, const double[::1] targets):
    cdef Py_ssize_t m = values.shape[0]
    cdef Py_ssize_t i
    cdef double total = 0.0
    cdef double suml, sumr, di, dr, t
    cdef double best_t = 0.0, best_thr = 0.0
    cdef bint found = False

    if m < 2:
        return -1.0, float("nan")
    for i in range(m):
        total += targets[i]
    suml = 0.0
    for i in range(1, m):
        suml += targets[i - 1]
        if not (values[i] > values[i - 1]):
            continue
        di = <double> i
        dr = <double> (m - i)
        sumr = total - suml
        t = (suml * suml) / di + (sumr * sumr) / dr
        if (not found) or t > best_t:
            found = True
            best_t = t
            best_thr = 0.5 * (values[i - 1] + values[i])
            if best_thr >= values[i]:
                best_thr = values[i - 1]
    if not found:
        return -1.0, float("nan")
    return best_t, best_thr


def apply_tree(const int[::1] feature, const double[::1] threshold,
               const int[::1] left, const int[::1] right,
               const double[:, ::1] X):
    cdef Py_ssize_t n = X.shape[0]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] out = np.zeros(n, dtype=np.int64)
    cdef long long[::1] ov = out
    cdef Py_ssize_t r
    cdef int node

    if feature[0] < 0:
        return out
    for r in range(n):
        node = 0
        while feature[node] >= 0:
            if X[r, feature[node]] <= threshold[node]:
                node = left[node]
            else:
                node = right[node]
        ov[r] = node
    return out
