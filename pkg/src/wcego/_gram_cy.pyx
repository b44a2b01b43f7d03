# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled backend for pairwise kernel-matrix assembly.

Single pass per entry, no temporaries: the hot loop of posterior fits,
acquisition sweeps and packing-table construction.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, sqrt

cnp.import_array()

BACKEND_NAME = "cython"


cdef inline double _sqdist_row(const double[:, ::1] X, const double[:, ::1] Y,
                               Py_ssize_t i, Py_ssize_t j, Py_ssize_t d) nogil:
    cdef double acc = 0.0
    cdef double diff
    cdef Py_ssize_t k
    for k in range(d):
        diff = X[i, k] - Y[j, k]
        acc += diff * diff
    return acc


def se_matrix(const double[:, ::1] X, const double[:, ::1] Y, double lengthscale):
    cdef Py_ssize_t t = X.shape[0], m = Y.shape[0], d = X.shape[1]
    cdef double inv = 1.0 / (lengthscale * lengthscale)
    out = np.empty((t, m), dtype=np.float64)
    cdef double[:, ::1] K = out
    cdef Py_ssize_t i, j
    with nogil:
        for i in range(t):
            for j in range(m):
                K[i, j] = exp(-_sqdist_row(X, Y, i, j, d) * inv)
    return out


def matern_matrix(const double[:, ::1] X, const double[:, ::1] Y,
                  double nu, double rho, double variance):
    cdef Py_ssize_t t = X.shape[0], m = Y.shape[0], d = X.shape[1]
    out = np.empty((t, m), dtype=np.float64)
    cdef double[:, ::1] K = out
    cdef Py_ssize_t i, j
    cdef double r, s, poly
    cdef double sq3 = sqrt(3.0), sq5 = sqrt(5.0), sq7 = sqrt(7.0)
    cdef int code
    if nu == 0.5:
        code = 0
    elif nu == 1.5:
        code = 1
    elif nu == 2.5:
        code = 2
    elif nu == 3.5:
        code = 3
    else:
        raise ValueError(f"unsupported Matern nu={nu}")
    with nogil:
        for i in range(t):
            for j in range(m):
                r = sqrt(_sqdist_row(X, Y, i, j, d)) / rho
                if code == 0:
                    s = r
                    poly = 1.0
                elif code == 1:
                    s = sq3 * r
                    poly = 1.0 + s
                elif code == 2:
                    s = sq5 * r
                    poly = 1.0 + s + (5.0 / 3.0) * r * r
                else:
                    s = sq7 * r
                    poly = (1.0 + s + (14.0 / 5.0) * r * r
                            + (7.0 * sq7 / 15.0) * r * r * r)
                K[i, j] = variance * poly * exp(-s)
    return out


def quadratic_matrix(const double[:, ::1] X, const double[:, ::1] Y):
    cdef Py_ssize_t t = X.shape[0], m = Y.shape[0], d = X.shape[1]
    out = np.empty((t, m), dtype=np.float64)
    cdef double[:, ::1] K = out
    cdef Py_ssize_t i, j, k
    cdef double ip
    with nogil:
        for i in range(t):
            for j in range(m):
                ip = 0.0
                for k in range(d):
                    ip += X[i, k] * Y[j, k]
                K[i, j] = ip * ip
    return out
