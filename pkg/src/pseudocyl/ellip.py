"""Elliptic integrals, Jacobi/Weierstrass functions, and closed-form profiles.

For cylinder dimensions 3, 4 and 6 the conformal-factor equation integrates
in closed form: the orbit with raw (unshifted, physically scaled) energy
``cbar`` is an elliptic function of physical time. This module provides the
special functions from first principles (AGM for the complete integral,
a descending Landen ladder for the Jacobi functions, real-branch reduction
for the Weierstrass function), the dimension-specific closed forms, the
hyperelliptic classification for other dimensions, and the amplitude /
gradient bounds used in the cylindrical estimates.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from pseudocyl.efcore import (
    SystemKind,
    _check_dimension,
    homoclinic_profile,
    integrate_orbit,
    structural_constants,
    turning_points,
)
from pseudocyl.period import period_u

__all__ = [
    "WeierstrassBranch",
    "ClosedForm",
    "CurveClass",
    "EstimateBounds",
    "elliptic_K",
    "jacobi_dn",
    "weierstrass_p",
    "real_period",
    "raw_energy",
    "closed_form",
    "evaluate_closed_form",
    "curve_class",
    "estimate_bounds",
]

_EPS = 2.220446049250313e-16
_MODULUS_CAP = 1.0 - 1e-10  # squared-modulus degeneracy threshold


class WeierstrassBranch(str, enum.Enum):
    """Real component of the Weierstrass cubic on which to evaluate.

    ``REAL_AXIS`` is the unbounded branch (pole at the origin, values in
    ``[e1, inf)``); ``BOUNDED`` the oscillatory branch with values in
    ``[e3, e2]``.
    """

    REAL_AXIS = "real_axis"
    BOUNDED = "bounded"


def elliptic_K(k: float) -> float:
    """Complete elliptic integral of the first kind, via the AGM."""
    if not 0.0 <= k < 1.0:
        raise ValueError(f"modulus must satisfy 0 <= k < 1, got {k!r}")
    a, b = 1.0, math.sqrt((1.0 - k) * (1.0 + k))
    while abs(a - b) > _EPS * a:
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return math.pi / (2.0 * a)


def _sncndn(u: float, k: float) -> tuple[float, float, float]:
    """Jacobi sn, cn, dn by the descending Landen (AGM) ladder."""
    if k == 0.0:
        return math.sin(u), math.cos(u), 1.0
    if k == 1.0:
        sech = 1.0 / math.cosh(u)
        return math.tanh(u), sech, sech
    a_list = [1.0]
    c_list = [k]
    b = math.sqrt((1.0 - k) * (1.0 + k))
    while abs(c_list[-1]) > _EPS * a_list[-1]:
        a, c = 0.5 * (a_list[-1] + b), 0.5 * (a_list[-1] - b)
        b = math.sqrt(a_list[-1] * b)
        a_list.append(a)
        c_list.append(c)
        if len(a_list) > 60:  # pragma: no cover - AGM is quadratic
            break
    n = len(a_list) - 1
    big_k = math.pi / (2.0 * a_list[-1])
    # Reduce modulo the full period to keep the doubled phase accurate.
    u = u - 4.0 * big_k * math.floor(u / (4.0 * big_k) + 0.5)
    phi = (2.0 ** n) * a_list[-1] * u
    for i in range(n, 0, -1):
        arg = (c_list[i] / a_list[i]) * math.sin(phi)
        arg = min(1.0, max(-1.0, arg))
        phi = 0.5 * (phi + math.asin(arg))
    sn = math.sin(phi)
    cn = math.cos(phi)
    # dn via the quotient cn / cos(phi_prev - phi) is 0/0-unstable at the
    # quarter period; dn^2 = k'^2 + k^2 cn^2 is exact and well conditioned.
    dn = math.sqrt((1.0 - k) * (1.0 + k) + (k * cn) ** 2)
    return sn, cn, dn


def jacobi_dn(x: float, k: float) -> float:
    """Jacobi dn(x, k) for modulus 0 <= k <= 1."""
    if not 0.0 <= k <= 1.0:
        raise ValueError(f"modulus must satisfy 0 <= k <= 1, got {k!r}")
    return _sncndn(x, k)[2]


def _cubic_roots(g2: float, g3: float) -> tuple[float, float, float]:
    """Real roots e1 >= e2 >= e3 of 4 t^3 - g2 t - g3 = 0.

    Requires a positive discriminant g2^3 - 27 g3^2 (three distinct real
    roots). A discriminant within rounding noise of zero is treated as a
    boundary case and resolved by clamping the trigonometric solver, so
    parameters approaching the degenerate locus keep evaluating; only a
    discriminant negative beyond noise is rejected.
    """
    disc = g2 ** 3 - 27.0 * g3 ** 2
    noise = 32.0 * _EPS * (abs(g2) ** 3 + 27.0 * g3 * g3)
    if disc <= -noise:
        raise ValueError(
            f"degenerate cubic: discriminant g2^3 - 27 g3^2 = {disc!r} <= 0")
    if g2 <= 0.0:
        raise ValueError(
            f"degenerate cubic: g2 = {g2!r} admits no real root triple")
    radius = 2.0 * math.sqrt(g2 / 12.0)
    arg = (3.0 * g3 / (2.0 * g2)) * math.sqrt(12.0 / g2)
    arg = min(1.0, max(-1.0, arg))
    theta = math.acos(arg)
    roots = sorted(
        (radius * math.cos((theta - 2.0 * math.pi * j) / 3.0) for j in range(3)),
        reverse=True)
    return roots[0], roots[1], roots[2]


def _weier_params(e1: float, e2: float, e3: float) -> tuple[float, float]:
    """Lattice rate sqrt(e1 - e3) and modulus from an ordered root triple."""
    if not (e1 >= e2 >= e3 and e1 > e3):
        raise ValueError(f"root triple must satisfy e1 >= e2 >= e3, "
                         f"got ({e1!r}, {e2!r}, {e3!r})")
    lam = math.sqrt(e1 - e3)
    msq = (e2 - e3) / (e1 - e3)
    if msq > _MODULUS_CAP:
        raise ValueError(
            f"modulus degeneracy: squared modulus {msq!r} exceeds {_MODULUS_CAP}")
    return lam, math.sqrt(msq)


def _weier_setup(g2: float, g3: float,
                 roots: tuple[float, float, float] | None = None):
    e1, e2, e3 = _cubic_roots(g2, g3) if roots is None else roots
    lam, m = _weier_params(e1, e2, e3)
    return e1, e2, e3, lam, m


def weierstrass_p(x: float, g2: float, g3: float,
                  branch: WeierstrassBranch = WeierstrassBranch.REAL_AXIS,
                  roots: tuple[float, float, float] | None = None,
                  ) -> tuple[float, float]:
    """Weierstrass function and derivative on a real branch.

    Returns ``(p(x), p'(x))``. The real-axis branch has a second-order pole
    at lattice points; evaluation within 1e-12 of the origin (or at any
    other pole) is rejected. ``roots`` overrides the cubic solve with a
    precomputed ordered triple (e1, e2, e3), which keeps near-degenerate
    parameters evaluable when the caller knows the roots to better accuracy
    than the discriminant resolves.
    """
    branch = WeierstrassBranch(branch)
    e1, e2, e3, lam, m = _weier_setup(g2, g3, roots)
    if branch is WeierstrassBranch.REAL_AXIS:
        if abs(x) < 1e-12:
            raise ValueError(f"evaluation too close to the pole at 0: x = {x!r}")
        sn, cn, dn = _sncndn(lam * x, m)
        if abs(sn) < 1e-12:
            raise ValueError(f"evaluation too close to a pole: x = {x!r}")
        p = e3 + (e1 - e3) / (sn * sn)
        pp = -2.0 * (e1 - e3) ** 1.5 * cn * dn / (sn ** 3)
        return p, pp
    sn, cn, dn = _sncndn(lam * x, m)
    p = e3 + (e2 - e3) * (sn * sn)
    pp = 2.0 * (e2 - e3) * lam * sn * cn * dn
    return p, pp


def real_period(g2: float, g3: float,
                roots: tuple[float, float, float] | None = None) -> float:
    """Real lattice period 2 K(m) / sqrt(e1 - e3) of the Weierstrass function."""
    _, _, _, lam, m = _weier_setup(g2, g3, roots)
    return 2.0 * elliptic_K(m) / lam


def raw_energy(n: int, c: float) -> float:
    """Raw (physically scaled, unshifted) energy cbar of the orbit at c.

    cbar = 2 alpha^2 beta^2 (c - 1/n); the admissible window is
    (-2 alpha^2 beta^2 / n, 0] for 0 <= c <= 1/n.
    """
    _check_dimension(n)
    if not 0.0 <= c <= 1.0 / n:
        raise ValueError(f"energy must satisfy 0 <= c <= 1/n, got {c!r}")
    cons = structural_constants(SystemKind.emden_fowler(n))
    return 2.0 * cons.alpha ** 2 * cons.beta ** 2 * (c - 1.0 / n)


@dataclass(frozen=True)
class ClosedForm:
    """Closed-form profile data for a dimension with an elliptic orbit.

    ``variant`` selects the evaluation rule:

    * ``"jacobi_dn"`` (n = 4): u(r) = scale * dn(time_scale * r, modulus);
    * ``"weierstrass_offset"`` (n = 6): u(r) = offset - p(r);
    * ``"weierstrass_inv_sqrt"`` (n = 3): u(r) = v^(-1/2) with
      v = (p(r + half period) - 1/12) / cbar.
    """

    variant: str
    n: int
    c: float
    cbar: float
    modulus: float | None = None
    scale: float | None = None
    time_scale: float | None = None
    g2: float | None = None
    g3: float | None = None
    offset: float | None = None
    roots: tuple[float, float, float] | None = None


@dataclass(frozen=True)
class CurveClass:
    """Algebraic classification of the orbit's spectral curve."""

    kind: str  # "elliptic" or "hyperelliptic"
    genus: int
    automorphic: bool


@dataclass(frozen=True)
class EstimateBounds:
    """Amplitude and gradient bounds of the physical profile at energy c."""

    n: int
    c: float
    C_n: float
    C_n_prime: float
    T: float


def closed_form(n: int, c: float) -> ClosedForm:
    """Closed-form parameters of the orbit at energy c for n in {3, 4, 6}."""
    _check_dimension(n)
    if n not in (3, 4, 6):
        raise ValueError(
            f"no elliptic closed form for n = {n}; see curve_class({n})")
    if not 0.0 < c < 1.0 / n:
        raise ValueError(f"energy must satisfy 0 < c < 1/n, got {c!r}")
    cbar = raw_energy(n, c)
    if n == 4:
        d = -cbar
        y = 2.0 / (1.0 + math.sqrt(1.0 - 4.0 * d))
        ksq = 2.0 - y
        if ksq > _MODULUS_CAP:
            raise ValueError(
                f"modulus degeneracy: squared modulus {ksq!r} at c = {c!r}")
        amp = 1.0 / math.sqrt(y)
        return ClosedForm("jacobi_dn", n, c, cbar,
                          modulus=math.sqrt(ksq), scale=amp, time_scale=amp)
    # For the Weierstrass variants the root triple is computed from the
    # turning points instead of the cubic discriminant: near the window
    # endpoints the roots collide and the discriminant falls below rounding
    # noise, while the turning points stay fully resolved.
    kind = SystemKind.emden_fowler(n)
    cons = structural_constants(kind)
    wa, wb = turning_points(kind, c)
    if n == 6:
        g2 = 4.0 / 3.0
        g3 = -8.0 / 27.0 - cbar
        e2 = 1.0 / 3.0 - cons.alpha * wa
        e3 = 1.0 / 3.0 - cons.alpha * wb
        roots = (-e2 - e3, e2, e3)
        _weier_params(*roots)  # validates ordering and modulus
        return ClosedForm("weierstrass_offset", n, c, cbar,
                          g2=g2, g3=g3, offset=1.0 / 3.0, roots=roots)
    g2 = 1.0 / 12.0
    g3 = cbar * cbar - 1.0 / 216.0
    e2 = 1.0 / 12.0 + cbar / (cons.alpha * wb) ** 2
    e3 = 1.0 / 12.0 + cbar / (cons.alpha * wa) ** 2
    roots = (-e2 - e3, e2, e3)
    _weier_params(*roots)
    return ClosedForm("weierstrass_inv_sqrt", n, c, cbar, g2=g2, g3=g3,
                      roots=roots)


def evaluate_closed_form(form: ClosedForm, r: float,
                         singular: bool = False) -> float:
    """Evaluate the closed-form profile u(r), phase-anchored at its maximum.

    With ``singular=True`` the unbounded (real-axis) branch is evaluated
    instead; it is real only for n = 6 (for n = 3 the shifted variable is
    negative there, for n = 4 the dn form has no real pole branch).
    """
    if form.variant == "jacobi_dn":
        if singular:
            raise ValueError("the dn closed form has no real singular branch")
        return form.scale * jacobi_dn(form.time_scale * r, form.modulus)
    if form.variant == "weierstrass_offset":
        branch = (WeierstrassBranch.REAL_AXIS if singular
                  else WeierstrassBranch.BOUNDED)
        p, _ = weierstrass_p(r, form.g2, form.g3, branch, roots=form.roots)
        return form.offset - p
    if form.variant == "weierstrass_inv_sqrt":
        if singular:
            raise ValueError(
                "the singular branch is not real-valued for n = 3")
        half = 0.5 * real_period(form.g2, form.g3, roots=form.roots)
        p, _ = weierstrass_p(r + half, form.g2, form.g3,
                             WeierstrassBranch.BOUNDED, roots=form.roots)
        v = (p - 1.0 / 12.0) / form.cbar
        if v <= 0.0:
            raise ValueError(f"profile not real at r = {r!r}")
        return 1.0 / math.sqrt(v)
    raise ValueError(f"unknown closed-form variant {form.variant!r}")


def curve_class(n: int) -> CurveClass:
    """Genus classification of the spectral curve in dimension n."""
    _check_dimension(n)
    if n in (3, 4, 6):
        return CurveClass("elliptic", 1, False)
    if n % 2 == 1:
        return CurveClass("hyperelliptic", (n - 1) // 2, False)
    return CurveClass("hyperelliptic", n // 4, True)


def _refined_max(values: np.ndarray) -> float:
    """Grid maximum improved by a parabolic fit through the peak triple."""
    i = int(np.argmax(values))
    if 0 < i < len(values) - 1:
        left, mid, right = values[i - 1], values[i], values[i + 1]
        denom = left - 2.0 * mid + right
        if denom < 0.0:
            return float(mid - (right - left) ** 2 / (8.0 * denom))
    return float(values[i])


def estimate_bounds(n: int, c: float) -> EstimateBounds:
    """Amplitude bound C_n = sup u and gradient bound C_n' = sup |beta u + u'|.

    The homoclinic energy c = 1/n is admitted: the amplitude bound then
    equals 1 exactly and the period is infinite.
    """
    _check_dimension(n)
    if not 0.0 < c <= 1.0 / n:
        raise ValueError(f"energy must satisfy 0 < c <= 1/n, got {c!r}")
    kind = SystemKind.emden_fowler(n)
    cons = structural_constants(kind)
    if c >= cons.c_max - 1e-12:
        t = np.linspace(-25.0, 25.0, 20001)
        v = homoclinic_profile(n, t)
        vp = -cons.beta * np.tanh(t) * v
        grad = np.abs(cons.beta * v + vp)
        return EstimateBounds(n, c, 1.0, _refined_max(grad), math.inf)
    _, b = turning_points(kind, c)
    orbit = integrate_orbit(kind, c, periods=1, steps_per_period=4096)
    grad = cons.alpha * cons.beta * np.abs(orbit.w + orbit.wp)
    return EstimateBounds(n, c, cons.alpha * b, _refined_max(grad),
                          period_u(kind, c))
