# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: cohort presence counting and batch binary Hellinger."""

import numpy as np

cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()

IMPL = "cython"


def subset_counts(cnp.int64_t[::1] indptr, cnp.int32_t[::1] indices,
                  cnp.int64_t[::1] rows, Py_ssize_t ndims):
    out = np.zeros(ndims, dtype=np.int64)
    cdef cnp.int64_t[::1] counts = out
    cdef Py_ssize_t i, j, r
    for i in range(rows.shape[0]):
        r = rows[i]
        for j in range(indptr[r], indptr[r + 1]):
            counts[indices[j]] += 1
    return out


def binary_hellinger(cnp.int64_t[::1] count_a, double n_a,
                     cnp.int64_t[::1] count_b, double n_b):
    cdef Py_ssize_t n = count_a.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] h = out
    cdef Py_ssize_t i
    cdef double p, q, s, v
    for i in range(n):
        p = count_a[i] / n_a
        q = count_b[i] / n_b
        s = (sqrt(p) - sqrt(q)) ** 2 + (sqrt(1.0 - p) - sqrt(1.0 - q)) ** 2
        v = sqrt(0.5 * s)
        h[i] = v if v < 1.0 else 1.0
    return out
