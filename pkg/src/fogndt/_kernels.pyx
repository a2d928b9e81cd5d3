# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled batch kernels for grid sweeps.

Same contracts as ``fogndt._kernels_py``; inputs are 1-D float64 arrays of
equal length, evaluated elementwise at a single fronthaul rate.
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()

cdef double TOL = 1e-9


cdef inline double dmin(double a, double b) nogil:
    return a if a < b else b


cdef inline double dmax(double a, double b) nogil:
    return a if a > b else b


cdef inline int regime(double lo, double hi, double r) nogil:
    if r > 1.0:
        return 4
    if hi < 0.5:
        return 1
    if lo > 0.5:
        return 3
    return 2


cdef inline double inner_component(int ell, double lo, double hi, double r) nogil:
    cdef double inv_r = 1.0 / r
    if ell == 1:
        return 1.0 + inv_r - (inv_r - 1.0) * hi - inv_r * lo
    if ell == 2:
        return 1.5 + inv_r * (0.5 - lo)
    if ell == 3:
        return 2.0 - lo
    return 1.0 + inv_r - inv_r * lo


cdef inline double outer_one(double a1, double a2, double b1, double b2, double r) nogil:
    cdef double inv_r = 1.0 / r
    cdef double least = dmin(dmin(a1, a2), dmin(b1, b2))
    cdef double o1, o2, o3
    if r > 1.0:
        return 1.0 + inv_r - inv_r * least
    o1 = 1.0 + inv_r - least - 0.5 * (inv_r - 1.0) * (a1 + a2 + b1 + b2)
    o2 = 1.5 + 0.5 * inv_r - least - 0.5 * (inv_r - 1.0) * dmin(a1 + a2, b1 + b2)
    o3 = 2.0 - least
    return dmax(o1, dmax(o2, o3))


cdef double lp_one(double a1, double a2, double b1, double b2, double r) nogil:
    cdef double ae[5]
    cdef double af[5]
    cdef double bb[5]
    cdef double least = dmin(dmin(a1, a2), dmin(b1, b2))
    cdef double si = a1 + a2
    cdef double sj = b1 + b2
    cdef int p, q, k
    cdef double det, e, f, val
    cdef double best = 1e300
    cdef bint feasible
    ae[0] = 1.0; af[0] = r;   bb[0] = 2.0 - least
    ae[1] = 0.0; af[1] = r;   bb[1] = 0.5 - 0.5 * dmin(si, sj)
    ae[2] = 0.0; af[2] = r;   bb[2] = 1.0 - 0.5 * si - 0.5 * sj
    ae[3] = 1.0; af[3] = 0.0; bb[3] = 1.0
    ae[4] = 0.0; af[4] = 1.0; bb[4] = 0.0
    for p in range(5):
        for q in range(p + 1, 5):
            det = ae[p] * af[q] - af[p] * ae[q]
            if det < 1e-15 and det > -1e-15:
                continue
            e = (bb[p] * af[q] - af[p] * bb[q]) / det
            f = (ae[p] * bb[q] - bb[p] * ae[q]) / det
            feasible = True
            for k in range(5):
                if ae[k] * e + af[k] * f - bb[k] < -TOL:
                    feasible = False
                    break
            if feasible:
                val = e + f
                if val < best:
                    best = val
    return best


def inner_batch(double[::1] mu_i, double[::1] mu_j, double r):
    cdef Py_ssize_t n = mu_i.shape[0], k
    if mu_j.shape[0] != n:
        raise ValueError("input arrays differ in length")
    out = np.empty(n, dtype=np.float64)
    reg = np.empty(n, dtype=np.int64)
    cdef double[::1] ov = out
    cdef cnp.int64_t[::1] rv = reg
    cdef double lo, hi
    cdef int ell
    with nogil:
        for k in range(n):
            lo = dmin(mu_i[k], mu_j[k])
            hi = dmax(mu_i[k], mu_j[k])
            ell = regime(lo, hi, r)
            ov[k] = inner_component(ell, lo, hi, r)
            rv[k] = ell
    return out, reg


def outer_batch(double[::1] mu_1i, double[::1] mu_2i, double[::1] mu_1j, double[::1] mu_2j, double r):
    cdef Py_ssize_t n = mu_1i.shape[0], k
    if mu_2i.shape[0] != n or mu_1j.shape[0] != n or mu_2j.shape[0] != n:
        raise ValueError("input arrays differ in length")
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] ov = out
    with nogil:
        for k in range(n):
            ov[k] = outer_one(mu_1i[k], mu_2i[k], mu_1j[k], mu_2j[k], r)
    return out


def lp_batch(double[::1] mu_1i, double[::1] mu_2i, double[::1] mu_1j, double[::1] mu_2j, double r):
    cdef Py_ssize_t n = mu_1i.shape[0], k
    if mu_2i.shape[0] != n or mu_1j.shape[0] != n or mu_2j.shape[0] != n:
        raise ValueError("input arrays differ in length")
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] ov = out
    with nogil:
        for k in range(n):
            ov[k] = lp_one(mu_1i[k], mu_2i[k], mu_1j[k], mu_2j[k], r)
    return out
