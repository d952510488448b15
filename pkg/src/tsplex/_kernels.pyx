# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels: Gaussian TC triangle sweep and l1-ball projection.

Numerically identical to `tsplex._kernels_py`; parity is enforced by tests.
"""

from libc.math cimport log, fabs
from libc.stdlib cimport malloc, free

import numpy as np
cimport numpy as cnp

cnp.import_array()

COV_REGULARIZATION = 1e-12
DET_FLOOR = 1e-300

cdef double _REG = 1e-12
cdef double _FLOOR = 1e-300


def gaussian_tc_from_cov(cov, triples):
    """Gaussian total correlation per node triple from a covariance matrix.

    See `tsplex._kernels_py.gaussian_tc_from_cov` for the contract; entries
    whose regularized 3x3 determinant underflows are NaN.
    """
    cdef double[:, ::1] c = np.ascontiguousarray(cov, dtype=np.float64)
    cdef long long[:, ::1] t = np.ascontiguousarray(triples, dtype=np.int64)
    cdef Py_ssize_t n = t.shape[0], m
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i, j, k
    cdef double vii, vjj, vkk, cij, cik, cjk, det3
    for m in range(n):
        i = t[m, 0]
        j = t[m, 1]
        k = t[m, 2]
        vii = c[i, i] + _REG
        vjj = c[j, j] + _REG
        vkk = c[k, k] + _REG
        cij = c[i, j]
        cik = c[i, k]
        cjk = c[j, k]
        det3 = (vii * (vjj * vkk - cjk * cjk)
                - cij * (cij * vkk - cjk * cik)
                + cik * (cij * cjk - vjj * cik))
        if det3 < _FLOOR:
            out[m] = <double> np.nan
        else:
            out[m] = 0.5 * (log(vii) + log(vjj) + log(vkk) - log(det3))
    return out_arr


cdef int _cmp_desc(const void* a, const void* b) noexcept nogil:
    cdef double x = (<const double*> a)[0]
    cdef double y = (<const double*> b)[0]
    if x < y:
        return 1
    elif x > y:
        return -1
    return 0


from libc.stdlib cimport qsort


def l1ball_project_columns(x, double radius):
    """Euclidean projection of each column of `x` onto the l1 ball."""
    x_arr = np.ascontiguousarray(np.asarray(x, dtype=np.float64))
    out_arr = x_arr.copy()
    if out_arr.size == 0:
        return out_arr
    if radius <= 0.0:
        out_arr[...] = 0.0
        return out_arr
    cdef double[:, ::1] src = x_arr
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t n = src.shape[0], m_cols = src.shape[1]
    cdef double* buf = <double*> malloc(n * sizeof(double))
    if buf == NULL:
        raise MemoryError()
    cdef Py_ssize_t col, r, rho
    cdef double l1, cssv, theta, v
    try:
        for col in range(m_cols):
            l1 = 0.0
            for r in range(n):
                buf[r] = fabs(src[r, col])
                l1 += buf[r]
            if l1 <= radius:
                continue
            qsort(buf, n, sizeof(double), _cmp_desc)
            cssv = 0.0
            theta = 0.0
            rho = -1
            for r in range(n):
                cssv += buf[r]
                if buf[r] > (cssv - radius) / (r + 1):
                    rho = r
                    theta = (cssv - radius) / (r + 1)
            for r in range(n):
                v = fabs(src[r, col]) - theta
                if v < 0.0:
                    v = 0.0
                out[r, col] = v if src[r, col] >= 0.0 else -v
    finally:
        free(buf)
    return out_arr
