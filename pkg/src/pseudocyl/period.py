"""Period function of the normalized dynamics and its energy derivative.

The minimal period of the orbit at energy ``c`` is

    T(c) = sqrt(2) * integral_a^b dw / sqrt(c - V(w)),

with turning points ``V(a) = V(b) = c``. The substitution
``w = a + (b - a) sin^2(theta)`` turns both inverse-square-root endpoint
singularities into an analytic integrand on ``[0, pi/2]``, which 16-point
Gauss-Legendre panels resolve spectrally. Two regimes need care:

* near the homoclinic level the integrand develops a boundary layer at
  ``theta = 0`` of width ``asin(sqrt(2 a / (b - a)))``; panels are graded
  dyadically below that scale (uniform panels can agree under doubling while
  being wrong there);
* for shallow wells the depth ``c - V`` loses all significant digits when
  assembled from O(1) quantities; the kernels evaluate it cancellation-free
  in both regimes (see ``_kernels_py``).

The energy derivative uses the variation

    T'(c) = (sqrt(2) / (2 c)) * integral_a^b B(w) / sqrt(c - V(w)) dw,
    B = 1 - 2 V g' / g^2,

whose integrand is again regularized by the same substitution; ``B`` has a
removable singularity at the center handled by its quadratic Taylor series.
All quadratures refine until a doubling of the panel density moves the
result by less than the requested tolerance and raise ``NonConvergenceError``
otherwise; they never silently degrade.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss

from pseudocyl import _backend
from pseudocyl.efcore import (
    SystemKind,
    _CENTER_SWITCH,
    _sign_exponent,
    _turning_displacements,
    nonlinearity,
    potential,
    structural_constants,
    turning_points,
)

__all__ = [
    "NonConvergenceError",
    "MonotonicityReport",
    "period",
    "period_u",
    "period_derivative",
    "chow_wang_H",
    "delta_criterion",
    "monotonicity_report",
]

_GL_NODES, _GL_WEIGHTS = (np.ascontiguousarray(v) for v in leggauss(16))
_PI_HALF = 0.5 * math.pi
_MAX_DENSITY = 256


class NonConvergenceError(RuntimeError):
    """A quadrature failed to converge at the maximum panel density."""


@dataclass
class MonotonicityReport:
    """Sampled period monotonicity over an interior energy grid."""

    kind: SystemKind
    grid: list[tuple[float, float, float]]  # (c, T, T')
    strictly_increasing: bool
    min_T_prime: float


def _theta_edges(a: float, b: float, density: int) -> np.ndarray:
    """Panel edges on [0, pi/2], graded dyadically inside the boundary layer.

    ``a`` and ``b`` are the turning points in the field coordinate; the layer
    scale only matters when the inner point approaches the origin
    (rho = 2a/(b-a) < 1/2).
    """
    rho = 2.0 * a / (b - a)
    if rho >= 0.5:
        return np.linspace(0.0, _PI_HALF, 8 * density + 1)
    layer = math.asin(math.sqrt(rho))
    blocks = [0.0, layer]
    while 2.0 * blocks[-1] < _PI_HALF:
        blocks.append(2.0 * blocks[-1])
    blocks.append(_PI_HALF)
    segments = [np.linspace(left, right, density + 1)[:-1]
                for left, right in zip(blocks[:-1], blocks[1:])]
    segments.append(np.array([_PI_HALF]))
    return np.concatenate(segments)


def _well(kind: SystemKind, c: float):
    """Geometry bundle for the quadratures at energy c.

    Returns ``(s, e, lo, hi, ref, center, a, b, c_max)`` where (lo, hi, ref)
    parameterize the kernel call and (a, b) are the field-space turning
    points used for panel grading.
    """
    s, e = _sign_exponent(kind)
    cons = structural_constants(kind)
    center = c < _CENTER_SWITCH * cons.c_max
    if center:
        xa, xb = _turning_displacements(kind, c)
        return s, e, xa, xb, c, True, 1.0 + xa, 1.0 + xb, cons.c_max
    a, b = turning_points(kind, c)
    return s, e, a, b, cons.c_max - c, False, a, b, cons.c_max


def _refine(evaluate, rel: float, absf: float, label: str) -> tuple[float, int]:
    """Double the panel density until two successive values agree.

    Tolerances below the rounding scatter of the quadrature (about 1e-11
    relative for the turning-point-anchored integrands) are never certified;
    such requests raise rather than silently return a less accurate value.
    """
    prev = None
    change = math.inf
    density = 2
    while density <= _MAX_DENSITY:
        value = evaluate(density)
        if not math.isfinite(value):
            raise NonConvergenceError(
                f"{label}: integrand not resolvable at panel density {density}")
        if prev is not None:
            change = abs(value - prev)
            if change <= rel * abs(value) + absf:
                return value, density
        prev = value
        density *= 2
    raise NonConvergenceError(
        f"{label}: no convergence at maximum panel density {_MAX_DENSITY} "
        f"(last change {change:.3e})")


def _check_energy(kind: SystemKind, c: float, allow_zero: bool) -> float:
    c_max = structural_constants(kind).c_max
    lower_ok = (c >= 0.0) if allow_zero else (c > 0.0)
    if not lower_ok or c >= c_max:
        lo = "0 <=" if allow_zero else "0 <"
        raise ValueError(
            f"energy out of range: need {lo} c < c_max = {c_max!r}, got {c!r}")
    return c_max


def period(kind: SystemKind, c: float, rel_tol: float = 1e-10) -> float:
    """Minimal period T(c) of the normalized orbit at energy c.

    ``c = 0`` returns the small-oscillation limit ``2 pi / sqrt(g'(1))``.

    ``rel_tol`` requests below about 1e-11 fall under the rounding scatter
    of the quadrature and raise :class:`NonConvergenceError` instead of
    returning an uncertified value.
    """
    if rel_tol <= 0.0:
        raise ValueError("rel_tol must be positive")
    c_max = _check_energy(kind, c, allow_zero=True)
    if c == 0.0:
        return 2.0 * math.pi / math.sqrt(nonlinearity(kind, 1.0)[1])
    s, e, lo, hi, ref, center, a, b, _ = _well(kind, c)
    absf = 1e-12 + (2e-11 * math.sqrt(c_max / c) if center else 0.0)

    def evaluate(density):
        return _backend.period_gl_sum(
            s, e, lo, hi, ref, center,
            _theta_edges(a, b, density), _GL_NODES, _GL_WEIGHTS)

    value, _ = _refine(evaluate, rel_tol, absf, f"period({kind.family.value}, c={c!r})")
    return value


def period_u(kind: SystemKind, c: float, rel_tol: float = 1e-10) -> float:
    """Period in physical time units: T(c) / beta."""
    return period(kind, c, rel_tol) / structural_constants(kind).beta


def period_derivative(kind: SystemKind, c: float, rel_tol: float = 1e-8) -> float:
    """Energy derivative T'(c) of the period function."""
    if rel_tol <= 0.0:
        raise ValueError("rel_tol must be positive")
    c_max = _check_energy(kind, c, allow_zero=False)
    s, e, lo, hi, ref, center, a, b, cm = _well(kind, c)
    absf = 1e-10 + 2e-9 * max(c_max / c - 1.0, 0.0)

    def evaluate(density):
        return _backend.tprime_gl_sum(
            s, e, c, cm, lo, hi, ref, center,
            _theta_edges(a, b, density), _GL_NODES, _GL_WEIGHTS)

    value, _ = _refine(evaluate, rel_tol, absf,
                       f"period_derivative({kind.family.value}, c={c!r})")
    return value


def _period_sum_at_density(kind: SystemKind, c: float, density: int) -> float:
    """Raw quadrature value at a fixed panel density (stability checks)."""
    s, e, lo, hi, ref, center, a, b, _ = _well(kind, c)
    return _backend.period_gl_sum(
        s, e, lo, hi, ref, center,
        _theta_edges(a, b, density), _GL_NODES, _GL_WEIGHTS)


def chow_wang_H(kind: SystemKind, x: float) -> float:
    """Monotonicity auxiliary H at displacement x from the center.

    H(x) = g~^2 - 2 V~ g~' + (g''(1) / (3 g'(1)^2)) g~^3 with all quantities
    evaluated at w = 1 + x; positivity of H on the well is the classical
    sufficient condition for a strictly increasing period.
    """
    cons = structural_constants(kind)
    if not -1.0 < x <= cons.b0 - 1.0 + 1e-12:
        raise ValueError(
            f"displacement must lie in (-1, b0 - 1], got {x!r}")
    g, gp, _ = nonlinearity(kind, 1.0 + x)
    _, g1, g2 = nonlinearity(kind, 1.0)
    v = potential(kind, 1.0 + x)
    return g * g - 2.0 * v * gp + (g2 / (3.0 * g1 * g1)) * g ** 3


def delta_criterion(kind: SystemKind, x: float) -> float:
    """Pointwise monotonicity criterion Delta(x).

    Delta(x) = (x - 1) * [g'(x) g''(1) - g'(1) g''(x)]; nonnegativity
    together with convexity of the force certifies a monotone period. The
    value is reported for both families, but for the warped-product family
    it is diagnostic only (the convexity hypothesis fails for n = 3, where
    the period in fact decreases); monotonicity conclusions there rest on
    the T' quadrature.
    """
    if x <= 0.0:
        raise ValueError(f"criterion defined for x > 0, got {x!r}")
    _, gp, gpp = nonlinearity(kind, x)
    _, g1, g2 = nonlinearity(kind, 1.0)
    return (x - 1.0) * (gp * g2 - g1 * gpp)


def monotonicity_report(kind: SystemKind, grid_size: int = 50) -> MonotonicityReport:
    """Sample (c, T, T') on a uniform interior energy grid.

    The grid is c_i = c_max * i / (grid_size + 1) for i = 1..grid_size, so it
    approaches both the small-oscillation and homoclinic regimes without
    touching either endpoint.
    """
    if not isinstance(grid_size, (int, np.integer)) or grid_size < 8:
        raise ValueError(f"grid_size must be an integer >= 8, got {grid_size!r}")
    c_max = structural_constants(kind).c_max
    rows = []
    for i in range(1, grid_size + 1):
        c = c_max * i / (grid_size + 1.0)
        rows.append((c, period(kind, c), period_derivative(kind, c)))
    periods = [row[1] for row in rows]
    increasing = all(b > a for a, b in zip(periods, periods[1:]))
    return MonotonicityReport(
        kind, rows, increasing, min(row[2] for row in rows))
