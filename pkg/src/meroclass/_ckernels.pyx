# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops; see ``_kernels_py`` for the reference versions."""
import numpy as np
cimport numpy as cnp
from libc.math cimport atan2, fabs, M_PI

cnp.import_array()


def series_reciprocal(const double complex[:] a, Py_ssize_t n):
    cdef Py_ssize_t na = a.shape[0], k, j
    out = np.zeros(n + 1, dtype=np.complex128)
    cdef double complex[:] r = out
    cdef double complex inv0 = 1.0 / a[0]
    cdef double complex acc
    r[0] = inv0
    for k in range(1, n + 1):
        acc = 0
        for j in range(1, min(k, na - 1) + 1):
            acc = acc + a[j] * r[k - j]
        r[k] = -inv0 * acc
    return out


def horner(const double complex[:] coeffs, z):
    zz = np.ascontiguousarray(z, dtype=np.complex128)
    flat = zz.reshape(-1)
    cdef Py_ssize_t n = flat.shape[0], i, k, m = coeffs.shape[0]
    cdef double[::1] xr = np.ascontiguousarray(flat.real)
    cdef double[::1] xi = np.ascontiguousarray(flat.imag)
    accr_arr = np.zeros(n)
    acci_arr = np.zeros(n)
    cdef double[::1] accr = accr_arr
    cdef double[::1] acci = acci_arr
    cdef double cr, ci, t
    # coefficient loop outside, points inside: independent chains vectorize
    for k in range(m - 1, -1, -1):
        cr = coeffs[k].real
        ci = coeffs[k].imag
        for i in range(n):
            t = accr[i] * xr[i] - acci[i] * xi[i] + cr
            acci[i] = accr[i] * xi[i] + acci[i] * xr[i] + ci
            accr[i] = t
    return (accr_arr + 1j * acci_arr).reshape(zz.shape)


def winding_numbers(const double complex[:] curve, const double complex[:] scale, points):
    pts = np.ascontiguousarray(points, dtype=np.complex128)
    cdef double complex[:] pv = pts
    out = np.empty(pts.shape[0], dtype=np.float64)
    cdef double[:] ov = out
    cdef Py_ssize_t i, s, ns = curve.shape[0]
    cdef double total, ar, ai, br, bi
    cdef double complex d
    for i in range(pv.shape[0]):
        total = 0.0
        d = curve[0] - pv[i] * scale[0]
        ar = d.real
        ai = d.imag
        for s in range(1, ns):
            d = curve[s] - pv[i] * scale[s]
            br = d.real
            bi = d.imag
            # arg(b / a)
            total += atan2(ar * bi - ai * br, ar * br + ai * bi)
            ar = br
            ai = bi
        ov[i] = total / (2.0 * M_PI)
    return out


def find_collision(z, w, double rel_tol, double min_sep):
    order = np.argsort(w.real, kind="stable")
    ws = np.ascontiguousarray(w[order], dtype=np.complex128)
    zs = np.ascontiguousarray(z[order], dtype=np.complex128)
    cdef double complex[:] wv = ws
    cdef double complex[:] zv = zs
    cdef long[:] ov = order.astype(np.int_)
    cdef Py_ssize_t n = wv.shape[0], i, j
    if n == 0:
        return None
    cdef double bound = rel_tol * (1.0 + np.abs(ws).max())
    cdef double tol_i
    for i in range(n):
        tol_i = rel_tol * (1.0 + abs(wv[i]))
        j = i + 1
        while j < n and wv[j].real - wv[i].real <= bound:
            if abs(wv[j] - wv[i]) < tol_i and abs(zv[j] - zv[i]) > min_sep:
                return int(ov[i]), int(ov[j])
            j += 1
    return None
