# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled grid kernels; semantics mirror ``_fallback.py`` exactly."""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, sin

cnp.import_array()


cdef inline double _sinc(double x) nogil:
    if x > -1e-8 and x < 1e-8:
        return 1.0 - x * x / 6.0
    return sin(x) / x


def amplitude_map_typeii(double[::1] theta, double[::1] omega,
                         double d_coeff, double b_coeff,
                         double length, double tau_extra):
    cdef Py_ssize_t nt = theta.shape[0]
    cdef Py_ssize_t nw = omega.shape[0]
    intensity = np.empty((nt, nw), dtype=np.float64)
    raw_phase = np.empty((nt, nw), dtype=np.float64)
    cdef double[:, ::1] iv = intensity
    cdef double[:, ::1] pv = raw_phase
    cdef Py_ssize_t i, j
    cdef double half, s
    with nogil:
        for i in range(nt):
            for j in range(nw):
                half = (d_coeff * omega[j] + b_coeff * theta[i]) * length * 0.5
                s = _sinc(half)
                iv[i, j] = s * s
                pv[i, j] = 2.0 * half + 2.0 * tau_extra * omega[j]
    return intensity, raw_phase


def amplitude_map_typei(double[::1] theta, double[::1] omega,
                        double gvd_o, double gvd_e,
                        double k_o, double k_e,
                        double length, double length2):
    cdef Py_ssize_t nt = theta.shape[0]
    cdef Py_ssize_t nw = omega.shape[0]
    intensity = np.empty((nt, nw), dtype=np.float64)
    raw_phase = np.empty((nt, nw), dtype=np.float64)
    cdef double[:, ::1] iv = intensity
    cdef double[:, ::1] pv = raw_phase
    cdef Py_ssize_t i, j
    cdef double th2, om2, half, s
    with nogil:
        for i in range(nt):
            th2 = theta[i] * theta[i]
            for j in range(nw):
                om2 = omega[j] * omega[j]
                half = (gvd_o * om2 - k_o * th2) * length * 0.5
                s = _sinc(half)
                iv[i, j] = s * s
                pv[i, j] = (gvd_e * om2 - k_e * th2) * length2
    return intensity, raw_phase


cdef inline void _edge_point(int edge, Py_ssize_t i, Py_ssize_t j,
                             double[::1] x, double[::1] y,
                             double g00, double g10, double g11, double g01,
                             double* px, double* py) nogil:
    cdef double t
    if edge == 0:
        t = g00 / (g00 - g10)
        px[0] = x[i] + t * (x[i + 1] - x[i])
        py[0] = y[j]
    elif edge == 1:
        t = g10 / (g10 - g11)
        px[0] = x[i + 1]
        py[0] = y[j] + t * (y[j + 1] - y[j])
    elif edge == 2:
        t = g01 / (g01 - g11)
        px[0] = x[i] + t * (x[i + 1] - x[i])
        py[0] = y[j + 1]
    else:
        t = g00 / (g00 - g01)
        px[0] = x[i]
        py[0] = y[j] + t * (y[j + 1] - y[j])


def contour_segments(double[::1] x, double[::1] y, double[:, ::1] field, double level):
    cdef Py_ssize_t nx = x.shape[0]
    cdef Py_ssize_t ny = y.shape[0]
    cdef Py_ssize_t i, j, count = 0
    cdef double g00, g10, g11, g01, centre
    cdef int case, k
    cdef int e_in[2]
    cdef int e_out[2]
    cdef int npairs
    # worst case two segments per cell
    buf = np.empty(((nx - 1) * (ny - 1) * 2, 4), dtype=np.float64)
    cdef double[:, ::1] bv = buf
    cdef double x0, y0, x1, y1

    for i in range(nx - 1):
        for j in range(ny - 1):
            g00 = field[i, j] - level
            g10 = field[i + 1, j] - level
            g11 = field[i + 1, j + 1] - level
            g01 = field[i, j + 1] - level
            case = 0
            if g00 >= 0: case |= 1
            if g10 >= 0: case |= 2
            if g11 >= 0: case |= 4
            if g01 >= 0: case |= 8
            if case == 0 or case == 15:
                continue
            npairs = 1
            if case == 1: e_in[0] = 3; e_out[0] = 0
            elif case == 2: e_in[0] = 0; e_out[0] = 1
            elif case == 3: e_in[0] = 3; e_out[0] = 1
            elif case == 4: e_in[0] = 1; e_out[0] = 2
            elif case == 6: e_in[0] = 0; e_out[0] = 2
            elif case == 7: e_in[0] = 3; e_out[0] = 2
            elif case == 8: e_in[0] = 2; e_out[0] = 3
            elif case == 9: e_in[0] = 2; e_out[0] = 0
            elif case == 11: e_in[0] = 2; e_out[0] = 1
            elif case == 12: e_in[0] = 1; e_out[0] = 3
            elif case == 13: e_in[0] = 1; e_out[0] = 0
            elif case == 14: e_in[0] = 0; e_out[0] = 3
            elif case == 5:
                npairs = 2
                centre = 0.25 * (g00 + g10 + g11 + g01)
                if centre >= 0:
                    e_in[0] = 3; e_out[0] = 0; e_in[1] = 1; e_out[1] = 2
                else:
                    e_in[0] = 3; e_out[0] = 2; e_in[1] = 1; e_out[1] = 0
            else:  # case == 10
                npairs = 2
                centre = 0.25 * (g00 + g10 + g11 + g01)
                if centre >= 0:
                    e_in[0] = 0; e_out[0] = 1; e_in[1] = 2; e_out[1] = 3
                else:
                    e_in[0] = 0; e_out[0] = 3; e_in[1] = 2; e_out[1] = 1
            for k in range(npairs):
                _edge_point(e_in[k], i, j, x, y, g00, g10, g11, g01, &x0, &y0)
                _edge_point(e_out[k], i, j, x, y, g00, g10, g11, g01, &x1, &y1)
                bv[count, 0] = x0
                bv[count, 1] = y0
                bv[count, 2] = x1
                bv[count, 3] = y1
                count += 1
    return np.asarray(buf[:count]).copy()
