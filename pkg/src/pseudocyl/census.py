"""Counting and solving the periodic metrics on a given circle length.

A circle length T admits the trivial (constant) solution always, plus one
j-fold orbit for every j >= 1 whose fundamental period T/j exceeds the first
bifurcation period. Counting is a pure period-comparison; solving inverts
the strictly monotone period function for each admissible j.

For the warped-product family the count follows the same bifurcation logic
in physical time, but attainability is subtler: the normalized period is
bounded (supremum n*pi/2), decreases with energy for n = 3, and is constant
for n = 4. Branches whose target period cannot be attained are reported in
a dedicated ``unresolved`` list rather than silently dropped or faked.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from pseudocyl.efcore import Family, SystemKind, _check_dimension, structural_constants
from pseudocyl.period import period, period_u

__all__ = [
    "SolutionBranch",
    "UnresolvedBranch",
    "DerdzinskiNormalization",
    "DerdzinskiCensus",
    "bifurcation_periods",
    "count_metrics",
    "solve_branches",
    "derdzinski_census",
    "degenerate_length",
]

_SNAP = 1e-9  # period-ratio snap window at bifurcation boundaries
_RESIDUAL_TOL = 1e-8  # fundamental-period residual for a resolved branch
_C_FLOOR_FRAC = 1e-8  # bottom of the root bracket, fraction of c_max
_C_CEIL_FRAC = 1.0 - 1e-12  # top of the root bracket, fraction of c_max


@dataclass(frozen=True)
class SolutionBranch:
    """One periodic solution on the circle of length T.

    ``j`` counts fundamental periods per circle (0 for the trivial constant
    branch, whose ``c`` and ``fundamental_period`` are zero by convention).
    ``resolved`` is False when the target period is unattainable within the
    floating-point energy range; ``period_residual`` records the distance
    |fundamental_period - T/j| actually achieved.
    """

    n: int
    T: float
    j: int
    c: float
    fundamental_period: float
    resolved: bool = True
    period_residual: float = 0.0


@dataclass(frozen=True)
class UnresolvedBranch:
    """A branch whose existence condition cannot be met by any real orbit."""

    j: int
    target_period: float
    attainable_limit: float
    note: str


@dataclass(frozen=True)
class DerdzinskiNormalization:
    """Physical scaling of the warped-product family.

    h(t) = alpha_D * f(beta_D * t) maps the normalized orbit f to the
    physical warping profile for Einstein-factor curvature R and constant C.
    """

    alpha_D: float
    beta_D: float
    C: float
    R: float


@dataclass(frozen=True)
class DerdzinskiCensus:
    """Count, solved branches and unresolved records for a warped census."""

    k: int
    branches: list[SolutionBranch]
    normalization: DerdzinskiNormalization
    unresolved: list[UnresolvedBranch]


def bifurcation_periods(n: int, kmax: int) -> list[float]:
    """The first kmax bifurcation periods 2 pi k / sqrt(n - 2)."""
    _check_dimension(n)
    if not isinstance(kmax, (int, np.integer)) or kmax < 1:
        raise ValueError(f"kmax must be a positive integer, got {kmax!r}")
    return [2.0 * math.pi * k / math.sqrt(n - 2.0) for k in range(1, kmax + 1)]


def _snapped_ratio(ratio: float) -> tuple[float, bool]:
    nearest = round(ratio)
    if abs(ratio - nearest) <= _SNAP:
        return float(nearest), True
    return ratio, False


def count_metrics(n: int, T: float) -> int:
    """Number of metrics on the circle of length T (trivial one included).

    The count is k for T in the right-closed window (T_{k-1}, T_k] between
    bifurcation periods; boundary lengths snap to the window below within a
    1e-9 period-ratio tolerance.
    """
    _check_dimension(n)
    if not T > 0.0:
        raise ValueError(f"circle length must be positive, got {T!r}")
    t1 = 2.0 * math.pi / math.sqrt(n - 2.0)
    ratio, snapped = _snapped_ratio(T / t1)
    k = int(ratio) if snapped else math.ceil(ratio)
    return max(k, 1)


def _solve_branch(kind: SystemKind, target: float, t_lo: float, t_hi: float,
                  c_lo: float, c_hi: float) -> tuple[float, float]:
    """Energy whose period best matches ``target`` on a monotone bracket.

    Returns ``(c, achieved_period)``; callers derive the residual. Assumes
    the period increases over the bracket and that t_lo <= target.
    """
    if target <= t_lo:
        return c_lo, t_lo
    if target >= t_hi:
        return c_hi, t_hi
    c = brentq(lambda cc: period(kind, cc) - target, c_lo, c_hi,
               xtol=1e-300, rtol=8.881784197001252e-16, maxiter=200)
    return c, period(kind, c)


def solve_branches(n: int, T: float) -> list[SolutionBranch]:
    """All solution branches on the circle of length T, trivial one first.

    The list always has exactly ``count_metrics(n, T)`` entries; targets
    driven into the unrepresentable deep-well regime come back flagged
    (``resolved=False``) with their achieved period residual recorded.
    """
    k = count_metrics(n, T)
    kind = SystemKind.emden_fowler(n)
    cons = structural_constants(kind)
    branches = [SolutionBranch(n, float(T), 0, 0.0, 0.0)]
    if k == 1:
        return branches
    c_lo = _C_FLOOR_FRAC * cons.c_max
    c_hi = _C_CEIL_FRAC * cons.c_max
    t_lo = period(kind, c_lo)
    t_hi = period(kind, c_hi)
    for j in range(1, k):
        target_u = T / j
        c, achieved_w = _solve_branch(kind, cons.beta * target_u,
                                      t_lo, t_hi, c_lo, c_hi)
        achieved_u = achieved_w / cons.beta
        residual = abs(achieved_u - target_u)
        branches.append(SolutionBranch(
            n, float(T), j, c, achieved_u,
            resolved=residual <= _RESIDUAL_TOL,
            period_residual=residual))
    return branches


def derdzinski_census(n: int, C: float, R: float, T: float) -> DerdzinskiCensus:
    """Warped-product census on the circle of length T.

    ``C`` is the separation constant and ``R`` the (positive) scalar
    curvature of the Einstein cross-section. The count k places T in the
    left-closed window [2 pi (k-1)/sqrt(C), 2 pi k/sqrt(C)); nontrivial
    branches require a fundamental period strictly above the bifurcation
    threshold and are solved in the normalized time of the f-equation.
    """
    _check_dimension(n)
    for name, val in (("C", C), ("R", R), ("T", T)):
        if not val > 0.0:
            raise ValueError(f"{name} must be positive, got {val!r}")
    alpha_d = ((n - 1.0) * C / (n * R)) ** (-n / 4.0)
    beta_d = math.sqrt(n * C / 4.0)
    norm = DerdzinskiNormalization(alpha_d, beta_d, float(C), float(R))

    ratio, snapped = _snapped_ratio(T * math.sqrt(C) / (2.0 * math.pi))
    k = (int(ratio) if snapped else math.floor(ratio)) + 1
    k = max(k, 1)

    kind = SystemKind.derdzinski(n)
    cons = structural_constants(kind)
    sup_f = n * math.pi / 2.0
    branches = [SolutionBranch(n, float(T), 0, 0.0, 0.0)]
    unresolved: list[UnresolvedBranch] = []
    c_lo = _C_FLOOR_FRAC * cons.c_max
    c_hi = _C_CEIL_FRAC * cons.c_max
    t_lo = t_hi = None
    for j in range(1, k):
        jratio, _ = _snapped_ratio(T * math.sqrt(C) / (2.0 * math.pi * j))
        if jratio <= 1.0:
            continue  # fundamental period not strictly above the threshold
        target_f = beta_d * T / j
        if n == 4:
            unresolved.append(UnresolvedBranch(
                j, target_f, cons.T1,
                "isochronous family: every orbit has the bifurcation period"))
            continue
        if n == 3:
            unresolved.append(UnresolvedBranch(
                j, target_f, cons.T1,
                "period decreases with energy; the target exceeds the "
                "zero-energy period"))
            continue
        if target_f >= sup_f:
            unresolved.append(UnresolvedBranch(
                j, target_f, sup_f,
                "target at or above the period supremum n*pi/2"))
            continue
        if t_lo is None:
            t_lo = period(kind, c_lo)
            t_hi = period(kind, c_hi)
        if target_f >= t_hi:
            unresolved.append(UnresolvedBranch(
                j, target_f, t_hi,
                "target beyond the resolvable energy range"))
            continue
        c, achieved = _solve_branch(kind, target_f, t_lo, t_hi, c_lo, c_hi)
        residual = abs(achieved - target_f)
        branches.append(SolutionBranch(
            n, float(T), j, c, achieved,
            resolved=residual <= _RESIDUAL_TOL,
            period_residual=residual))
    return DerdzinskiCensus(k, branches, norm, unresolved)


def degenerate_length(n: int, R0: float) -> float:
    """Circle length of the degenerate (round-sphere-factor) product."""
    _check_dimension(n)
    if not R0 > 0.0:
        raise ValueError(f"scalar curvature must be positive, got {R0!r}")
    return 2.0 * math.pi * math.sqrt((n - 1.0) / R0)
