# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled implementations of the numerical hot loops.

Mirrors ``_kernels_py`` exactly; see that module for the conventions
(theta-panel layout, standard vs center-anchored depth evaluation, the
``nan`` contract for non-positive depths).
"""

from libc.math cimport sqrt, sin, pow, log1p, expm1, fabs, NAN

import numpy as np

BACKEND = "compiled"

cdef double SQRT2 = 1.4142135623730951


cdef inline double _pval(double s, double e, double w) noexcept nogil:
    return s * (0.5 * w * w - pow(w, e + 1.0) / (e + 1.0))


cdef inline double _dval(double s, double e, double x) noexcept nogil:
    return s * (expm1((e + 1.0) * log1p(x)) / (e + 1.0) - x - 0.5 * x * x)


cdef double _period_sum(double s, double e, double lo, double hi, double ref,
                        bint center, double[::1] edges,
                        double[::1] gl_nodes,
                        double[::1] gl_weights) noexcept nogil:
    cdef Py_ssize_t m = edges.shape[0] - 1
    cdef Py_ssize_t q = gl_nodes.shape[0]
    cdef Py_ssize_t i, j
    cdef double acc = 0.0
    cdef double span = hi - lo
    cdef double mid, half, theta, s2, coord, num, qq
    for i in range(m):
        mid = 0.5 * (edges[i] + edges[i + 1])
        half = 0.5 * (edges[i + 1] - edges[i])
        for j in range(q):
            theta = mid + half * gl_nodes[j]
            s2 = sin(theta)
            s2 = s2 * s2
            coord = lo + span * s2
            if center:
                num = ref - _dval(s, e, coord)
            else:
                num = _pval(s, e, coord) - ref
            if num <= 0.0 or num != num:
                return NAN
            qq = num / (span * span * s2 * (1.0 - s2))
            acc += half * gl_weights[j] * 2.0 * SQRT2 / sqrt(qq)
    return acc


cdef double _tprime_sum(double s, double e, double c, double c_max,
                        double lo, double hi, double ref, bint center,
                        double[::1] edges, double[::1] gl_nodes,
                        double[::1] gl_weights) noexcept nogil:
    cdef Py_ssize_t m = edges.shape[0] - 1
    cdef Py_ssize_t q = gl_nodes.shape[0]
    cdef Py_ssize_t i, j
    cdef double acc = 0.0
    cdef double span = hi - lo
    cdef double mid, half, theta, s2, coord, num, qq
    cdef double w, x, v, g, gp, bfac
    for i in range(m):
        mid = 0.5 * (edges[i] + edges[i + 1])
        half = 0.5 * (edges[i + 1] - edges[i])
        for j in range(q):
            theta = mid + half * gl_nodes[j]
            s2 = sin(theta)
            s2 = s2 * s2
            coord = lo + span * s2
            if center:
                x = coord
                w = 1.0 + coord
                v = _dval(s, e, coord)
                num = ref - v
            else:
                w = coord
                x = coord - 1.0
                v = c_max - _pval(s, e, coord)
                num = _pval(s, e, coord) - ref
            if num <= 0.0 or num != num:
                return NAN
            if fabs(x) < 1.0e-3:
                bfac = (-e / 3.0) * x + (e / 2.0) * x * x
            else:
                g = s * (pow(w, e) - w)
                gp = s * (e * pow(w, e - 1.0) - 1.0)
                bfac = 1.0 - 2.0 * v * gp / (g * g)
            qq = num / (span * span * s2 * (1.0 - s2))
            acc += half * gl_weights[j] * (SQRT2 / c) * bfac / sqrt(qq)
    return acc


def period_gl_sum(double s, double e, double lo, double hi, double ref,
                  bint center, double[::1] edges,
                  double[::1] gl_nodes, double[::1] gl_weights):
    """Gauss-Legendre approximation of the period integral."""
    cdef double out
    with nogil:
        out = _period_sum(s, e, lo, hi, ref, center, edges,
                          gl_nodes, gl_weights)
    return out


def tprime_gl_sum(double s, double e, double c, double c_max,
                  double lo, double hi, double ref, bint center,
                  double[::1] edges,
                  double[::1] gl_nodes, double[::1] gl_weights):
    """Gauss-Legendre approximation of the period-derivative integral."""
    cdef double out
    with nogil:
        out = _tprime_sum(s, e, c, c_max, lo, hi, ref, center, edges,
                          gl_nodes, gl_weights)
    return out


def rk4_orbit(double s, double e, double w0, double wp0,
              double h, Py_ssize_t nsteps):
    """Classical fixed-step RK4 for ``w'' + s*(w**e - w) = 0``."""
    w_arr = np.empty(nsteps + 1)
    wp_arr = np.empty(nsteps + 1)
    cdef double[::1] w = w_arr
    cdef double[::1] wp = wp_arr
    cdef double x = w0, v = wp0
    cdef double a1, a2, a3, a4, v2, v3, v4, x2, x3, x4
    cdef Py_ssize_t i
    w[0] = w0
    wp[0] = wp0
    with nogil:
        for i in range(1, nsteps + 1):
            a1 = -s * (pow(x, e) - x)
            v2 = v + 0.5 * h * a1
            x2 = x + 0.5 * h * v
            a2 = -s * (pow(x2, e) - x2)
            v3 = v + 0.5 * h * a2
            x3 = x + 0.5 * h * v2
            a3 = -s * (pow(x3, e) - x3)
            v4 = v + h * a3
            x4 = x + h * v3
            a4 = -s * (pow(x4, e) - x4)
            x = x + h * (v + 2.0 * v2 + 2.0 * v3 + v4) / 6.0
            v = v + h * (a1 + 2.0 * a2 + 2.0 * a3 + a4) / 6.0
            w[i] = x
            wp[i] = v
    return w_arr, wp_arr
