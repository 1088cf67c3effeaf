"""Normalized cylinder dynamics.

Both metric families reduce, after scaling out their physical constants, to
the one-degree-of-freedom oscillator

    w'' + g(w) = 0,      g(w) = s * (w**e - w),

with a single stable center at w = 1. The conformally-cylindric family uses
``s = +1, e = (n+2)/(n-2)``; the warped-product family uses
``s = -1, e = 1 - 4/n``. Orbits are labeled by the conserved energy

    c = w'^2 / 2 + V(w),

where V is the potential well shifted so that V(1) = 0; periodic orbits fill
``0 < c < c_max`` with ``c_max = V(0)`` the homoclinic level.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from pseudocyl import _backend

__all__ = [
    "Family",
    "SystemKind",
    "PhaseState",
    "StructuralConstants",
    "OrbitTrajectory",
    "structural_constants",
    "nonlinearity",
    "potential",
    "energy",
    "turning_points",
    "integrate_orbit",
    "homoclinic_profile",
    "denormalize",
]

_BRENTQ_XTOL = 1e-300  # forces rtol-limited bisection
_BRENTQ_RTOL = 8.881784197001252e-16  # 4 ulp
_CENTER_SWITCH = 0.02  # fraction of c_max below which the well is
# anchored at the center instead of the origin


class Family(str, enum.Enum):
    """The two metric families sharing the normalized dynamics."""

    EMDEN_FOWLER = "emden_fowler"
    DERDZINSKI = "derdzinski"


def _check_dimension(n) -> int:
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < 3:
        raise ValueError(f"dimension must be an integer >= 3, got {n!r}")
    return int(n)


@dataclass(frozen=True)
class SystemKind:
    """A normalized dynamical system: family tag plus cylinder dimension."""

    family: Family
    n: int

    def __post_init__(self):
        _check_dimension(self.n)
        object.__setattr__(self, "family", Family(self.family))

    @classmethod
    def emden_fowler(cls, n: int) -> "SystemKind":
        return cls(Family.EMDEN_FOWLER, n)

    @classmethod
    def derdzinski(cls, n: int) -> "SystemKind":
        return cls(Family.DERDZINSKI, n)


@dataclass(frozen=True)
class PhaseState:
    """A point (t, w, w') on a normalized orbit."""

    t: float
    w: float
    wp: float


@dataclass(frozen=True)
class StructuralConstants:
    """Scaling constants tying the normalized system to the metric problem.

    ``alpha``/``beta`` scale amplitude and time back to the physical
    solution, ``b0`` is the upper edge of the potential well at the
    homoclinic level, ``c_max`` the homoclinic energy and ``T1`` the first
    bifurcation period of the physical-time linearization.
    """

    alpha: float
    beta: float
    b0: float
    c_max: float
    T1: float


@dataclass
class OrbitTrajectory:
    """A sampled trajectory of the normalized (or rescaled) dynamics."""

    kind: SystemKind
    c: float
    t: np.ndarray
    w: np.ndarray
    wp: np.ndarray
    energy_drift: float
    drift_exceeded: bool
    normalized: bool = True

    @property
    def samples(self) -> list[PhaseState]:
        """The trajectory as an ordered list of phase states."""
        return [PhaseState(float(a), float(b), float(d))
                for a, b, d in zip(self.t, self.w, self.wp)]


def _sign_exponent(kind: SystemKind) -> tuple[float, float]:
    """Signed-force parameters (s, e) with g(w) = s*(w**e - w)."""
    n = kind.n
    if kind.family is Family.EMDEN_FOWLER:
        return 1.0, (n + 2.0) / (n - 2.0)
    return -1.0, 1.0 - 4.0 / n


def structural_constants(kind: SystemKind) -> StructuralConstants:
    """Scaling constants of the given family and dimension."""
    n = kind.n
    if kind.family is Family.EMDEN_FOWLER:
        alpha = ((n - 2.0) / n) ** ((n - 2.0) / 4.0)
        beta = (n - 2.0) / 2.0
        b0 = (n / (n - 2.0)) ** ((n - 2.0) / 4.0)
        c_max = 1.0 / n
        t1 = 2.0 * math.pi / math.sqrt(n - 2.0)
    else:
        # Physical scaling lives in the census mapping; the normalized
        # system itself carries unit amplitude and time factors.
        alpha = 1.0
        beta = 1.0
        b0 = (n / (n - 2.0)) ** (n / 4.0)
        c_max = 1.0 / (n - 2.0)
        t1 = math.pi * math.sqrt(n)
    return StructuralConstants(alpha, beta, b0, c_max, t1)


def nonlinearity(kind: SystemKind, w: float) -> tuple[float, float, float]:
    """The restoring force g(w) and its first two derivatives.

    ``w = 0`` is admitted only for the conformally-cylindric family, where
    the force extends continuously (g'' may be infinite for n > 6).
    """
    s, e = _sign_exponent(kind)
    if w < 0.0 or (w == 0.0 and kind.family is Family.DERDZINSKI):
        raise ValueError(f"force undefined at w = {w!r} for {kind.family.value}")
    if w == 0.0:
        g = 0.0
        gp = -s
        if e > 2.0:
            gpp = 0.0
        elif e == 2.0:
            gpp = s * e * (e - 1.0)
        else:
            gpp = math.inf
        return g, gp, gpp
    g = s * (w ** e - w)
    gp = s * (e * w ** (e - 1.0) - 1.0)
    gpp = s * (e * (e - 1.0) * w ** (e - 2.0))
    return g, gp, gpp


def _pfun(s, e, w):
    """Cancellation-free well height above the homoclinic level.

    P(w) = s*(w^2/2 - w^(e+1)/(e+1)) = c_max - V(w), exact at both ends:
    P(0) = 0 and P(b0) = 0 up to rounding.
    """
    return s * (0.5 * w * w - w ** (e + 1.0) / (e + 1.0))


def _dfun(s, e, x):
    """Center-anchored well depth D(x) = V(1 + x), accurate for small |x|."""
    return s * (np.expm1((e + 1.0) * np.log1p(x)) / (e + 1.0)
                - x - 0.5 * x * x)


def potential(kind: SystemKind, w):
    """Shifted potential V(w) with V(1) = 0 and V(0) = c_max."""
    s, e = _sign_exponent(kind)
    if np.any(np.asarray(w) < 0.0):
        raise ValueError("potential defined for w >= 0")
    c_max = structural_constants(kind).c_max
    out = c_max - _pfun(s, e, np.asarray(w, dtype=float))
    return float(out) if np.ndim(w) == 0 else out


def energy(kind: SystemKind, state: PhaseState) -> float:
    """Conserved energy c = w'^2/2 + V(w) of a phase state."""
    return 0.5 * state.wp * state.wp + potential(kind, state.w)


def _turning_displacements(kind: SystemKind, c: float) -> tuple[float, float]:
    """Turning points as displacements (xa, xb) from the center, xa < 0 < xb.

    Solving in the displacement coordinate keeps full relative precision for
    shallow wells, where ``1 + x`` would truncate x to absolute rounding.
    """
    s, e = _sign_exponent(kind)
    cons = structural_constants(kind)

    def f(x):
        return c - _dfun(s, e, x)

    xa = brentq(f, -1.0 + 1e-15, 0.0, xtol=_BRENTQ_XTOL, rtol=_BRENTQ_RTOL)
    xb = brentq(f, 0.0, cons.b0 - 1.0, xtol=_BRENTQ_XTOL, rtol=_BRENTQ_RTOL)
    return xa, xb


def turning_points(kind: SystemKind, c: float) -> tuple[float, float]:
    """Inner and outer turning points (a, b) of the periodic orbit at energy c."""
    s, e = _sign_exponent(kind)
    cons = structural_constants(kind)
    if not 0.0 < c < cons.c_max:
        raise ValueError(
            f"periodic orbits require 0 < c < c_max = {cons.c_max!r}, got {c!r}")
    if c < _CENTER_SWITCH * cons.c_max:
        xa, xb = _turning_displacements(kind, c)
        return 1.0 + xa, 1.0 + xb

    delta = cons.c_max - c

    def h(w):
        return _pfun(s, e, w) - delta

    a = brentq(h, 0.0, 1.0, xtol=_BRENTQ_XTOL, rtol=_BRENTQ_RTOL)
    try:
        b = brentq(h, 1.0, cons.b0, xtol=_BRENTQ_XTOL, rtol=_BRENTQ_RTOL)
    except ValueError:
        # c so close to c_max that rounding of P(b0) hides the sign change;
        # widen the bracket by a relative hair.
        b = brentq(h, 1.0, cons.b0 * (1.0 + 1e-9),
                   xtol=_BRENTQ_XTOL, rtol=_BRENTQ_RTOL)
    return a, b


def integrate_orbit(kind: SystemKind, c: float, periods: int = 1,
                    steps_per_period: int = 2000,
                    drift_tolerance: float = 1e-8) -> OrbitTrajectory:
    """Fixed-step RK4 trajectory over full periods, starting at (b, 0).

    Degenerate energies: ``c <= 1e-12`` returns the exact constant orbit;
    energies within ``1e-12`` of the homoclinic level are rejected. Energy
    drift beyond ``drift_tolerance`` sets a flag rather than raising.
    """
    if not isinstance(periods, (int, np.integer)) or periods < 1:
        raise ValueError(f"periods must be a positive integer, got {periods!r}")
    if not isinstance(steps_per_period, (int, np.integer)) or steps_per_period < 64:
        raise ValueError(
            f"steps_per_period must be an integer >= 64, got {steps_per_period!r}")
    cons = structural_constants(kind)
    if c < 0.0 or c >= cons.c_max - 1e-12:
        raise ValueError(
            f"periodic integration requires 0 <= c < c_max - 1e-12, got {c!r}")
    from pseudocyl.period import period as _period  # deferred: cyclic module pair

    nsteps = int(periods) * int(steps_per_period)
    if c <= 1e-12:
        t_total = periods * 2.0 * math.pi / math.sqrt(
            nonlinearity(kind, 1.0)[1])
        t = np.linspace(0.0, t_total, nsteps + 1)
        w = np.ones(nsteps + 1)
        wp = np.zeros(nsteps + 1)
        return OrbitTrajectory(kind, float(c), t, w, wp, 0.0, False, True)

    s, e = _sign_exponent(kind)
    t_period = _period(kind, c)
    _, b = turning_points(kind, c)
    h = t_period / steps_per_period
    w, wp = _backend.rk4_orbit(s, e, b, 0.0, h, nsteps)
    t = h * np.arange(nsteps + 1)
    energies = 0.5 * wp * wp + (cons.c_max - _pfun(s, e, w))
    drift = float(np.max(np.abs(energies - energies[0])))
    return OrbitTrajectory(kind, float(c), t, w, wp, drift,
                           drift > drift_tolerance, True)


def homoclinic_profile(n: int, t):
    """The bounded separatrix profile u0(t) = cosh(t)**(-(n-2)/2)."""
    _check_dimension(n)
    out = np.cosh(np.asarray(t, dtype=float)) ** (-(n - 2.0) / 2.0)
    return float(out) if np.ndim(t) == 0 else out


def denormalize(n: int, w_orbit: OrbitTrajectory) -> OrbitTrajectory:
    """Rescale a normalized conformal-factor orbit to physical amplitude/time.

    u(t) = alpha * w(beta * t); the returned trajectory carries u-samples on
    the physical time grid. Only defined for the conformally-cylindric
    family; the energy label and drift diagnostic stay in normalized units.
    """
    _check_dimension(n)
    kind = w_orbit.kind
    if kind.family is not Family.EMDEN_FOWLER or kind.n != n:
        raise ValueError(
            f"orbit belongs to {kind.family.value} (n={kind.n}), "
            f"cannot denormalize as dimension {n}")
    if not w_orbit.normalized:
        raise ValueError("orbit is already denormalized")
    cons = structural_constants(kind)
    return OrbitTrajectory(
        kind, w_orbit.c,
        w_orbit.t / cons.beta,
        cons.alpha * w_orbit.w,
        cons.alpha * cons.beta * w_orbit.wp,
        w_orbit.energy_drift, w_orbit.drift_exceeded,
        normalized=False)
