"""Pure NumPy implementations of the numerical hot loops.

These mirror the compiled Cython kernels in ``_kernels.pyx`` exactly; the
package selects whichever imports successfully (see ``_backend``). All three
entry points are deliberately low level: they know nothing about model
families beyond the signed exponent pair ``(s, e)`` of the restoring force
``g(w) = s * (w**e - w)``.

Conventions shared with the compiled twin:

* ``period_gl_sum`` and ``tprime_gl_sum`` integrate over ``theta`` panels
  after the substitution ``coord = lo + (hi - lo) * sin(theta)**2`` which
  absorbs the inverse-square-root turning-point singularities.
* In the *standard* form (``center=False``) the coordinate is the field value
  ``w`` itself and the depth below the energy level is evaluated
  cancellation-free as ``P(w) - ref``, where ``P(w) = s*(w^2/2 - w^(e+1)/(e+1))``
  and ``ref`` is the gap ``c_max - c``.
* In the *center-anchored* form (``center=True``) the coordinate is the
  displacement ``x = w - 1`` and the depth is ``ref - D(x)`` with
  ``D(x) = s*(expm1((e+1)*log1p(x))/(e+1) - x - x^2/2)`` and ``ref = c``;
  this keeps the absolute error proportional to ``|x|`` for shallow wells.
* A non-positive depth at any node (possible only if the turning points are
  off by more than their root tolerance) yields ``nan`` so the caller can
  fail loudly instead of integrating garbage.
"""

from __future__ import annotations

import numpy as np

BACKEND = "pure-python"

_SQRT2 = np.sqrt(2.0)


def _nodes(s, e, lo, hi, ref, center, edges, gl_nodes, gl_weights):
    """Evaluate the well geometry at all Gauss-Legendre panel nodes.

    Returns ``(wts, num, w, x, v, s2)``: quadrature weights, depth below the
    energy level, field value, displacement from the center, well depth
    ``V(w)`` and ``sin(theta)**2``.
    """
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    theta = (mid[:, None] + half[:, None] * gl_nodes[None, :]).ravel()
    wts = (half[:, None] * gl_weights[None, :]).ravel()
    s2 = np.sin(theta)
    s2 = s2 * s2
    coord = lo + (hi - lo) * s2
    if center:
        x = coord
        w = 1.0 + coord
        v = s * (np.expm1((e + 1.0) * np.log1p(coord)) / (e + 1.0)
                 - coord - 0.5 * coord * coord)
        num = ref - v
    else:
        w = coord
        x = coord - 1.0
        p = s * (0.5 * coord * coord - coord ** (e + 1.0) / (e + 1.0))
        num = p - ref
        v = None  # recovered as c_max - P(w) by the caller where needed
    return wts, num, w, x, v, s2


def period_gl_sum(s, e, lo, hi, ref, center, edges, gl_nodes, gl_weights):
    """Gauss-Legendre approximation of the period integral.

    Returns ``sum w_i * 2*sqrt(2)/sqrt(Q_i)`` over all panel nodes, where
    ``Q = num / ((hi-lo)^2 * sin^2 * cos^2)``. ``nan`` signals a node at or
    below the energy level.
    """
    wts, num, _, _, _, s2 = _nodes(s, e, lo, hi, ref, center,
                                   edges, gl_nodes, gl_weights)
    if np.any(num <= 0.0) or not np.all(np.isfinite(num)):
        return float("nan")
    span = hi - lo
    q = num / (span * span * s2 * (1.0 - s2))
    return float(np.sum(wts * 2.0 * _SQRT2 / np.sqrt(q)))


def tprime_gl_sum(s, e, c, c_max, lo, hi, ref, center,
                  edges, gl_nodes, gl_weights):
    """Gauss-Legendre approximation of the period-derivative integral.

    Same panel layout as ``period_gl_sum``; the integrand carries the factor
    ``B = 1 - 2*V*g'/g**2`` (series ``-(e/3)x + (e/2)x^2`` for |x| < 1e-3,
    removing the removable 0/0 at the center) and the overall weight
    ``sqrt(2)/c``.
    """
    wts, num, w, x, v, s2 = _nodes(s, e, lo, hi, ref, center,
                                   edges, gl_nodes, gl_weights)
    if np.any(num <= 0.0) or not np.all(np.isfinite(num)):
        return float("nan")
    bfac = np.empty_like(x)
    series = np.abs(x) < 1.0e-3
    xs = x[series]
    bfac[series] = (-e / 3.0) * xs + (e / 2.0) * xs * xs
    full = ~series
    if np.any(full):
        wf = w[full]
        if center:
            vf = v[full]
        else:
            pf = s * (0.5 * wf * wf - wf ** (e + 1.0) / (e + 1.0))
            vf = c_max - pf
        g = s * (wf ** e - wf)
        gp = s * (e * wf ** (e - 1.0) - 1.0)
        bfac[full] = 1.0 - 2.0 * vf * gp / (g * g)
    span = hi - lo
    q = num / (span * span * s2 * (1.0 - s2))
    return float(np.sum(wts * (_SQRT2 / c) * bfac / np.sqrt(q)))


def rk4_orbit(s, e, w0, wp0, h, nsteps):
    """Classical fixed-step RK4 for ``w'' + s*(w**e - w) = 0``.

    Returns ``(w, wp)`` arrays of length ``nsteps + 1`` starting from the
    state ``(w0, wp0)``.
    """
    w = np.empty(nsteps + 1)
    wp = np.empty(nsteps + 1)
    w[0] = w0
    wp[0] = wp0
    x = float(w0)
    v = float(wp0)
    for i in range(1, nsteps + 1):
        a1 = -s * (x ** e - x)
        v2 = v + 0.5 * h * a1
        x2 = x + 0.5 * h * v
        a2 = -s * (x2 ** e - x2)
        v3 = v + 0.5 * h * a2
        x3 = x + 0.5 * h * v2
        a3 = -s * (x3 ** e - x3)
        v4 = v + h * a3
        x4 = x + h * v3
        a4 = -s * (x4 ** e - x4)
        x = x + h * (v + 2.0 * v2 + 2.0 * v3 + v4) / 6.0
        v = v + h * (a1 + 2.0 * a2 + 2.0 * a3 + a4) / 6.0
        w[i] = x
        wp[i] = v
    return w, wp
