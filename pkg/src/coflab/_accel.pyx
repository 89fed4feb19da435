# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled resolvent series; same contract as coflab._pure.psi_series."""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, log1p, lgamma, fabs, ceil, INFINITY

cnp.import_array()

cdef double EPS = 2.220446049250313e-16


def start_index(int n, double s):
    cdef double v = s * s + 2 * n * s + 2 * s + 2 * n
    if v < 0:
        v = 0
    return <long>ceil(v) + 4


def psi_series(u, int n, double s, int deriv, double log_c0, double abs_tol, long k_max):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] uu = np.ascontiguousarray(u, dtype=np.float64).ravel()
    cdef Py_ssize_t m = uu.shape[0], i
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(m)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] err = np.empty(m)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] used = np.empty(m, dtype=np.int64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] ok = np.empty(m, dtype=np.uint8)
    cdef long k0 = start_index(n, s), k
    cdef double rising = lgamma(s + deriv) - lgamma(s)
    cdef double q, t, total, mass, rho, r, bound, sign
    cdef bint done
    sign = -1.0 if deriv % 2 else 1.0
    for i in range(m):
        q = 1.0 / (uu[i] + 1.0)
        t = exp(log_c0 + rising - (s + deriv) * log1p(uu[i]))
        total = 0.0
        mass = 0.0
        k = 0
        done = False
        bound = INFINITY
        while k < k_max:
            total += t
            mass += fabs(t)
            rho = (s + 2 * n + k) * (s + k + deriv) / ((k + 1.0) * (2 * s + 2 * n + k)) * q
            if k >= k0 and rho < 1.0:
                r = rho if rho > q else q
                bound = fabs(t) * r / (1.0 - r)
                if bound < abs_tol:
                    done = True
                    break
            t *= rho
            k += 1
        out[i] = sign * total
        err[i] = bound + EPS * (k + 1) * mass
        used[i] = k + 1
        ok[i] = done
    shape = np.shape(u)
    return (out.reshape(shape), err.reshape(shape), used.reshape(shape),
            ok.astype(bool).reshape(shape))
