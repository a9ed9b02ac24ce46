# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner-loop kernels; see ``_kernels_py`` for the reference semantics."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()


def distance_stats(x, w, delta):
    cdef const double[:, ::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef const double[:, ::1] wv = np.ascontiguousarray(w, dtype=np.float64)
    cdef const double[:, ::1] ev = np.ascontiguousarray(delta, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0], p = xv.shape[1]
    cdef Py_ssize_t i, j, s
    cdef double acc, t, dij, res
    cdef double sigma = 0.0, rho = 0.0, eta2 = 0.0
    out = np.zeros((n, n), dtype=np.float64)
    cdef double[:, ::1] dv = out
    for i in range(n):
        for j in range(i + 1, n):
            acc = 0.0
            for s in range(p):
                t = xv[i, s] - xv[j, s]
                acc = acc + t * t
            dij = sqrt(acc)
            dv[i, j] = dij
            dv[j, i] = dij
            res = ev[i, j] - dij
            sigma += wv[i, j] * res * res
            rho += wv[i, j] * ev[i, j] * dij
            eta2 += wv[i, j] * dij * dij
    return out, 0.5 * sigma, rho, eta2


def b_matrix(wdelta, d):
    cdef const double[:, ::1] wd = np.ascontiguousarray(wdelta, dtype=np.float64)
    cdef const double[:, ::1] dv = np.ascontiguousarray(d, dtype=np.float64)
    cdef Py_ssize_t n = dv.shape[0]
    cdef Py_ssize_t i, j
    cdef long dropped = 0
    cdef double v
    cdef long double rowsum
    out = np.zeros((n, n), dtype=np.float64)
    cdef double[:, ::1] b = out
    for i in range(n):
        for j in range(i + 1, n):
            if dv[i, j] > 0.0:
                v = -wd[i, j] / dv[i, j]
                b[i, j] = v
                b[j, i] = v
            elif wd[i, j] > 0.0:
                dropped += 1
    for i in range(n):
        rowsum = 0.0
        for j in range(n):
            rowsum += b[i, j]
        b[i, i] = -(<double>rowsum)
    return out, int(dropped)


def hessian_blocks(x, wdelta, d):
    cdef const double[:, ::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef const double[:, ::1] wd = np.ascontiguousarray(wdelta, dtype=np.float64)
    cdef const double[:, ::1] dv = np.ascontiguousarray(d, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0], p = xv.shape[1]
    cdef Py_ssize_t i, j, s, t
    cdef double c, v
    cdef long double rowsum
    out = np.zeros((p, p, n, n), dtype=np.float64)
    cdef double[:, :, :, ::1] g = out
    for i in range(n):
        for j in range(i + 1, n):
            if dv[i, j] <= 0.0:
                continue
            c = wd[i, j] / (dv[i, j] * dv[i, j] * dv[i, j])
            for s in range(p):
                for t in range(s, p):
                    v = -c * (xv[i, s] - xv[j, s]) * (xv[i, t] - xv[j, t])
                    g[s, t, i, j] = v
                    g[s, t, j, i] = v
                    if t != s:
                        g[t, s, i, j] = v
                        g[t, s, j, i] = v
    for s in range(p):
        for t in range(p):
            for i in range(n):
                rowsum = 0.0
                for j in range(n):
                    rowsum += g[s, t, i, j]
                g[s, t, i, i] = -(<double>rowsum)
    return out
