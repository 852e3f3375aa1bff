# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: banded finite differences and oscillatory phase sums."""
import numpy as np

cimport numpy as cnp
from libc.math cimport cos, sin

cnp.import_array()


def fd_derivative(values, interior, edge_left, edge_right):
    """Apply a banded finite-difference derivative to complex samples.

    Same contract as the numpy fallback: interior is a (2p+1,) stencil
    already divided by the spacing; edge stencils are (p, w) rows acting
    on the first/last w samples.
    """
    cdef const cnp.complex128_t[::1] v = np.ascontiguousarray(values, dtype=np.complex128)
    cdef const double[::1] cin = np.ascontiguousarray(interior, dtype=np.float64)
    cdef const double[:, ::1] el = np.ascontiguousarray(edge_left, dtype=np.float64)
    cdef const double[:, ::1] er = np.ascontiguousarray(edge_right, dtype=np.float64)
    cdef Py_ssize_t n = v.shape[0]
    cdef Py_ssize_t p = cin.shape[0] // 2
    cdef Py_ssize_t w = el.shape[1]
    out_arr = np.zeros(n, dtype=np.complex128)
    cdef cnp.complex128_t[::1] out = out_arr
    cdef Py_ssize_t i, s
    cdef double c
    cdef double complex acc
    for i in range(p, n - p):
        acc = 0
        for s in range(2 * p + 1):
            acc = acc + cin[s] * v[i - p + s]
        out[i] = acc
    for i in range(p):
        acc = 0
        for s in range(w):
            acc = acc + el[i, s] * v[s]
        out[i] = acc
        acc = 0
        for s in range(w):
            acc = acc + er[i, s] * v[n - w + s]
        out[n - p + i] = acc
    return out_arr


def phase_amplitudes(coeffs, energies, times):
    """amp[i] = sum_j coeffs[j] * exp(-1j * times[i] * energies[j])."""
    cdef const cnp.complex128_t[::1] c = np.ascontiguousarray(coeffs, dtype=np.complex128)
    cdef const double[::1] e = np.ascontiguousarray(energies, dtype=np.float64)
    cdef const double[::1] t = np.ascontiguousarray(times, dtype=np.float64)
    cdef Py_ssize_t n = c.shape[0]
    cdef Py_ssize_t m = t.shape[0]
    out_arr = np.empty(m, dtype=np.complex128)
    cdef cnp.complex128_t[::1] out = out_arr
    cdef Py_ssize_t i, j
    cdef double ph, cr, si, ar, ai, re, im
    for i in range(m):
        ar = 0.0
        ai = 0.0
        for j in range(n):
            ph = -t[i] * e[j]
            cr = cos(ph)
            si = sin(ph)
            re = c[j].real
            im = c[j].imag
            ar += re * cr - im * si
            ai += re * si + im * cr
        out[i] = ar + 1j * ai
    return out_arr
