"""Cross-module self-checks.

Every check exercises a mathematical identity or structural invariant that
an implementation error would break: scaling identities of the structural
constants, conservation and refinement order of the integrator, agreement
of independent routes to the same quantity (quadrature vs. closed form,
derivative vs. finite differences), and end-to-end CLI determinism. The
checks are deliberately redundant with the unit tests; they are cheap
enough to run in deployed environments via the command line.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass

import numpy as np

from pseudocyl import census, curvature, efcore, ellip
from pseudocyl.period import (
    _period_sum_at_density,
    period,
    period_derivative,
    period_u,
)

__all__ = ["CheckResult", "run_checks"]


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one named self-check."""

    module: str
    name: str
    passed: bool
    measured: float
    tolerance: float
    note: str = ""


def _result(module, name, passed, measured, tolerance, note=""):
    return CheckResult(module, name, bool(passed), float(measured),
                       float(tolerance), note)


# ---------------------------------------------------------------- efcore

def _check_constant_identity():
    worst = 0.0
    for n in range(3, 11):
        ef = efcore.SystemKind.emden_fowler(n)
        cons = efcore.structural_constants(ef)
        worst = max(
            worst,
            abs(cons.alpha ** (4.0 / (n - 2.0)) - (n - 2.0) / n),
            abs(cons.alpha * cons.b0 - 1.0),
            abs(efcore.potential(ef, cons.b0) - cons.c_max))
        dz = efcore.SystemKind.derdzinski(n)
        dcons = efcore.structural_constants(dz)
        worst = max(worst, abs(efcore.potential(dz, dcons.b0) - dcons.c_max))
    return _result("efcore", "constant_identity", worst <= 1e-13, worst, 1e-13)


def _check_energy_conservation():
    kind = efcore.SystemKind.emden_fowler(4)
    fine = efcore.integrate_orbit(kind, 0.09)
    coarse = efcore.integrate_orbit(kind, 0.09, steps_per_period=1000)
    ratio = coarse.energy_drift / max(fine.energy_drift, 5e-17)
    passed = fine.energy_drift <= 1e-8 and ratio >= 8.0
    return _result("efcore", "energy_conservation", passed,
                   fine.energy_drift, 1e-8,
                   note=f"halving the step divides drift by {ratio:.1f}")


def _check_turning_consistency():
    cases = [
        (efcore.SystemKind.emden_fowler(4), 0.09),
        (efcore.SystemKind.emden_fowler(3), 0.3 / 3.0),
        (efcore.SystemKind.emden_fowler(7), 0.8 / 7.0),
        (efcore.SystemKind.emden_fowler(5), 0.001 / 5.0),
        (efcore.SystemKind.derdzinski(8), 0.1),
        (efcore.SystemKind.derdzinski(5), 0.25),
    ]
    worst = 0.0
    ordered = True
    for kind, c in cases:
        a, b = efcore.turning_points(kind, c)
        worst = max(worst,
                    abs(efcore.potential(kind, a) - c),
                    abs(efcore.potential(kind, b) - c))
        ordered = ordered and (efcore.nonlinearity(kind, a)[0] < 0.0
                               < efcore.nonlinearity(kind, b)[0])
    return _result("efcore", "turning_consistency", worst <= 1e-13 and ordered,
                   worst, 1e-13, note="restoring force signed outward" if
                   ordered else "force sign violated at a turning point")


def _check_homoclinic_residual():
    worst = 0.0
    t = np.linspace(-8.0, 8.0, 2001)
    ch = np.cosh(t)
    for n in range(3, 11):
        beta = (n - 2.0) / 2.0
        u = efcore.homoclinic_profile(n, t)
        upp = beta * beta * u - beta * (beta + 1.0) * ch ** (-beta - 2.0)
        rhs = beta * beta * u - (n * (n - 2.0) / 4.0) * u ** ((n + 2.0) / (n - 2.0))
        worst = max(worst, float(np.max(np.abs(upp - rhs))))
    return _result("efcore", "homoclinic_residual", worst <= 1e-11, worst, 1e-11)


def _check_denormalize_scaling():
    kind = efcore.SystemKind.emden_fowler(5)
    cons = efcore.structural_constants(kind)
    orbit = efcore.integrate_orbit(kind, 0.1, steps_per_period=256)
    phys = efcore.denormalize(5, orbit)
    res = max(
        float(np.max(np.abs(phys.t * cons.beta - orbit.t))),
        float(np.max(np.abs(phys.w - cons.alpha * orbit.w))),
        float(np.max(np.abs(phys.wp - cons.alpha * cons.beta * orbit.wp))))
    passed = res <= 1e-12 and not phys.normalized and phys.c == orbit.c
    return _result("efcore", "denormalize_scaling", passed, res, 1e-12)


# ---------------------------------------------------------------- period

def _check_small_energy_limit():
    worst = 0.0
    for n in (3, 4, 6, 8):
        for kind, lim in (
                (efcore.SystemKind.emden_fowler(n), math.pi * math.sqrt(n - 2.0)),
                (efcore.SystemKind.derdzinski(n), math.pi * math.sqrt(n))):
            t = period(kind, 1e-8)
            worst = max(worst, abs(t - lim) / lim)
    return _result("period", "small_energy_limit", worst <= 1e-6, worst, 1e-6)


def _check_divergence_monotone():
    min_gap = math.inf
    for n in (4, 7):
        kind = efcore.SystemKind.emden_fowler(n)
        c_max = efcore.structural_constants(kind).c_max
        values = [period(kind, c_max * (1.0 - 10.0 ** (-k)))
                  for k in range(2, 7)]
        min_gap = min(min_gap, min(b - a for a, b in zip(values, values[1:])))
    return _result("period", "divergence_monotone", min_gap > 0.0, min_gap, 0.0,
                   note="period gain per decade of homoclinic approach")


def _check_derivative_fd():
    cases = [(efcore.SystemKind.emden_fowler(4), f)
             for f in (0.3, 0.7)]
    cases += [(efcore.SystemKind.emden_fowler(6), f) for f in (0.3, 0.7)]
    cases += [(efcore.SystemKind.derdzinski(8), f) for f in (0.3, 0.7)]
    worst = 0.0
    for kind, frac in cases:
        c_max = efcore.structural_constants(kind).c_max
        c = frac * c_max
        h = 1e-5 * c_max
        fd = (period(kind, c + h, rel_tol=1e-11)
              - period(kind, c - h, rel_tol=1e-11)) / (2.0 * h)
        tp = period_derivative(kind, c)
        worst = max(worst, abs(tp - fd) / abs(fd))
    return _result("period", "derivative_fd", worst <= 1e-4, worst, 1e-4)


def _check_quadrature_stability():
    cases = [
        (efcore.SystemKind.emden_fowler(4), 0.09),
        (efcore.SystemKind.emden_fowler(3), 0.1),
        (efcore.SystemKind.emden_fowler(6), 0.9 / 6.0),
        (efcore.SystemKind.derdzinski(8), 0.1),
    ]
    worst = 0.0
    for kind, c in cases:
        adaptive = period(kind, c)
        fixed = _period_sum_at_density(kind, c, 16)
        worst = max(worst, abs(fixed - adaptive) / adaptive)
    return _result("period", "quadrature_stability", worst <= 1e-9, worst, 1e-9,
                   note="adaptive value vs. fixed density-16 panels")


# ---------------------------------------------------------------- census

def _check_consistency_count():
    expected = [(0.5, 1), (1.0, 1), (1.5, 2), (2.0, 2), (3.7, 4), (6.0, 6)]
    mismatches = 0
    for n in range(3, 9):
        t1 = 2.0 * math.pi / math.sqrt(n - 2.0)
        for ratio, want in expected:
            if census.count_metrics(n, ratio * t1) != want:
                mismatches += 1
    return _result("census", "consistency_count", mismatches == 0,
                   mismatches, 0.0)


def _check_orbit_return():
    branches = census.solve_branches(4, 10.0)
    kind = efcore.SystemKind.emden_fowler(4)
    worst = 0.0
    for br in branches[1:]:
        if not br.resolved:
            continue
        orbit = efcore.integrate_orbit(kind, br.c, periods=br.j,
                                       steps_per_period=4000)
        worst = max(worst,
                    abs(float(orbit.w[-1]) - float(orbit.w[0])),
                    abs(float(orbit.wp[-1]) - float(orbit.wp[0])))
    return _result("census", "orbit_return", worst <= 1e-6, worst, 1e-6,
                   note="j-fold orbits close up after j fundamental periods")


def _check_boundary_collapse():
    t1u = 2.0 * math.pi / math.sqrt(2.0)
    branches = census.solve_branches(4, 2.0 * t1u * (1.0 + 1e-6))
    newest = branches[-1]
    passed = (len(branches) == 3 and newest.j == 2 and newest.resolved
              and 0.0 < newest.c < 1e-3)
    return _result("census", "boundary_collapse", passed, newest.c, 1e-3,
                   note="branch energy collapses at the bifurcation length")


def _check_derd4_isochronous():
    cen = census.derdzinski_census(4, 1.0, 12.0, 13.0)
    passed = (len(cen.branches) == 1 and cen.branches[0].j == 0
              and len(cen.unresolved) == 2
              and all("isochronous" in u.note for u in cen.unresolved))
    return _result("census", "derd4_isochronous", passed,
                   len(cen.unresolved), 2.0,
                   note="n = 4 warped branches are all period-locked")


def _check_monotone_energies():
    branches = census.solve_branches(4, 15.0)
    cs = [br.c for br in branches[1:]]
    ok = all(br.resolved for br in branches[1:]) and len(cs) == 3
    min_gap = min(a - b for a, b in zip(cs, cs[1:])) if len(cs) > 1 else math.inf
    return _result("census", "monotone_energies", ok and min_gap > 0.0,
                   min_gap, 0.0, note="higher winding number, lower energy")


# ---------------------------------------------------------------- ellip

def _check_dn_identity():
    worst = 0.0
    for k in (0.0, 0.3, 0.75, 0.95, 1.0):
        for u in (-3.7, -1.0, 0.0, 0.5, 2.0, 7.3):
            sn, cn, dn = ellip._sncndn(u, k)
            worst = max(worst,
                        abs(sn * sn + cn * cn - 1.0),
                        abs(dn * dn - (1.0 - (k * sn) ** 2)))
    return _result("ellip", "dn_identity", worst <= 1e-12, worst, 1e-12)


def _check_period_agreement_n4():
    kind = efcore.SystemKind.emden_fowler(4)
    worst = 0.0
    for c in (0.01, 0.05, 0.09, 0.2):
        form = ellip.closed_form(4, c)
        closed = 2.0 * ellip.elliptic_K(form.modulus) / form.time_scale
        worst = max(worst, abs(closed - period_u(kind, c)))
    return _result("ellip", "period_agreement_n4", worst <= 1e-8, worst, 1e-8)


def _check_period_agreement_weier():
    worst = 0.0
    for n, c in ((6, 1.0 / 12.0), (3, 0.05)):
        form = ellip.closed_form(n, c)
        closed = ellip.real_period(form.g2, form.g3)
        quad = period_u(efcore.SystemKind.emden_fowler(n), c)
        worst = max(worst, abs(closed - quad))
    return _result("ellip", "period_agreement_weier", worst <= 1e-6,
                   worst, 1e-6)


def _check_closed_vs_integrated():
    worst = 0.0
    for n in (3, 4, 6):
        c = 0.4 / n
        kind = efcore.SystemKind.emden_fowler(n)
        orbit = efcore.integrate_orbit(kind, c, steps_per_period=4000)
        phys = efcore.denormalize(n, orbit)
        form = ellip.closed_form(n, c)
        for i in range(0, len(phys.t), 125):
            u = ellip.evaluate_closed_form(form, float(phys.t[i]))
            worst = max(worst, abs(u - float(phys.w[i])))
    return _result("ellip", "closed_vs_integrated", worst <= 1e-7, worst, 1e-7)


def _check_laurent_tail():
    worst = 0.0
    g3_interior = ellip.closed_form(3, 0.05).g3
    for g2, g3 in ((4.0 / 3.0, 0.0), (1.0 / 12.0, g3_interior)):
        for x in (1e-2, 1e-3):
            p, _ = ellip.weierstrass_p(x, g2, g3,
                                       ellip.WeierstrassBranch.REAL_AXIS)
            worst = max(worst, abs(
                x * x * p - 1.0 - (g2 / 20.0) * x ** 4 - (g3 / 28.0) * x ** 6))
    return _result("ellip", "laurent_tail", worst <= 1e-12, worst, 1e-12,
                   note="pole expansion p(x) = x^-2 + g2/20 x^2 + g3/28 x^4")


def _check_curve_window():
    failures = 0
    for n in (3, 4, 6):
        for c in (1e-9, (1.0 / n) * (1.0 - 1e-9)):
            try:
                form = ellip.closed_form(n, c)
                ellip.evaluate_closed_form(form, 0.3)
            except ValueError:
                failures += 1
    table = {3: ("elliptic", 1, False), 4: ("elliptic", 1, False),
             6: ("elliptic", 1, False), 5: ("hyperelliptic", 2, False),
             7: ("hyperelliptic", 3, False), 8: ("hyperelliptic", 2, True),
             9: ("hyperelliptic", 4, False), 12: ("hyperelliptic", 3, True)}
    for n, want in table.items():
        cc = ellip.curve_class(n)
        if (cc.kind, cc.genus, cc.automorphic) != want:
            failures += 1
    try:
        ellip.closed_form(5, 0.05)
        failures += 1
    except ValueError:
        pass
    for n, c in ((3, 0.05), (6, 0.12)):
        form = ellip.closed_form(n, c)
        generic = ellip._cubic_roots(form.g2, form.g3)
        if max(abs(a - b) for a, b in zip(form.roots, generic)) > 1e-12:
            failures += 1
    return _result("ellip", "curve_window", failures == 0, failures, 0.0,
                   note="turning-point roots match the cubic solve")


def _check_bound_validity():
    worst_exceed = 0.0
    worst_gap = 0.0
    for n in (3, 4, 6):
        kind = efcore.SystemKind.emden_fowler(n)
        cons = efcore.structural_constants(kind)
        for frac in (0.2, 0.8):
            c = frac / n
            eb = ellip.estimate_bounds(n, c)
            orbit = efcore.integrate_orbit(kind, c, steps_per_period=8192)
            amp = float(np.max(cons.alpha * orbit.w))
            grad = float(np.max(
                cons.alpha * cons.beta * np.abs(orbit.w + orbit.wp)))
            worst_exceed = max(worst_exceed, amp - eb.C_n, grad - eb.C_n_prime)
            worst_gap = max(worst_gap, eb.C_n - amp, eb.C_n_prime - grad)
    passed = worst_exceed <= 1e-8 and worst_gap <= 1e-6
    return _result("ellip", "bound_validity", passed,
                   max(worst_exceed, worst_gap), 1e-6,
                   note="bounds hold and are attained along the orbit")


def _check_homoclinic_bounds():
    eb = ellip.estimate_bounds(4, 0.25)
    passed = eb.C_n == 1.0 and math.isinf(eb.T) and eb.C_n_prime > 0.0
    return _result("ellip", "homoclinic_bounds", passed,
                   abs(eb.C_n - 1.0), 0.0,
                   note="separatrix amplitude bound is exactly 1")


# ------------------------------------------------------------- curvature

def _check_scalar_constancy():
    worst = 0.0
    for n, c in ((4, 0.09), (4, 0.23), (6, 0.1), (3, 0.2)):
        kind = efcore.SystemKind.emden_fowler(n)
        orbit = efcore.integrate_orbit(kind, c, steps_per_period=512)
        phys = efcore.denormalize(n, orbit)
        beta_sq = ((n - 2.0) / 2.0) ** 2
        target = n * (n - 1.0)
        for i in range(0, len(phys.t), 16):
            u = float(phys.w[i])
            up = float(phys.wp[i])
            upp = beta_sq * u - (n * (n - 2.0) / 4.0) * u ** (
                (n + 2.0) / (n - 2.0))
            comp = curvature.ricci_components(n, u, up, upp)
            worst = max(worst, abs(comp.scalar - target))
    return _result("curvature", "scalar_constancy", worst <= 1e-6, worst, 1e-6)


def _check_trace_audit():
    worst = 0.0
    weakest = math.inf
    for n in (3, 4, 5, 7, 10):
        audit = curvature.sign_audit(n)
        worst = max(worst, audit.corrected_residual)
        weakest = min(weakest, audit.printed_residual)
    passed = worst <= 1e-12 and weakest > 1e-3
    return _result("curvature", "trace_audit", passed, worst, 1e-12,
                   note=f"rejected transcription misses by >= {weakest:.3e}")


def _check_witness_structure():
    kind = efcore.SystemKind.emden_fowler(4)
    cons = efcore.structural_constants(kind)
    zero_const = abs(curvature.witness_value(4, cons.alpha, 0.0))
    a, b = efcore.turning_points(kind, 0.09)
    zero_turn = max(abs(curvature.witness_value(4, cons.alpha * a, 0.0)),
                    abs(curvature.witness_value(4, cons.alpha * b, 0.0)))
    orbit = efcore.integrate_orbit(kind, 0.09)
    report = curvature.nonparallel_witness(4, efcore.denormalize(4, orbit))
    passed = (zero_const <= 1e-12 and zero_turn <= 1e-9
              and report.max_witness > 1e-3)
    return _result("curvature", "witness_structure", passed,
                   report.max_witness, 1e-3,
                   note="zero on the product metric, nonzero on orbits")


def _check_pohozaev_properties():
    exact_zero = curvature.pohozaev(5, 0.0) == 0.0
    linear = abs(2.0 * curvature.pohozaev(4, 0.1)
                 - curvature.pohozaev(4, 0.2)) <= 1e-12
    residual = abs(curvature.pohozaev(3, 1.0 / 3.0)
                   - 32.0 * math.pi / 3.0)
    passed = exact_zero and linear and residual <= 1e-10
    return _result("curvature", "pohozaev_properties", passed,
                   residual, 1e-10)


def _check_functional_ordering():
    kind = efcore.SystemKind.emden_fowler(4)
    t1 = efcore.structural_constants(kind).T1
    j_triv_t1 = curvature.yamabe_functional(4, t1)
    mu = curvature.reference_constants(4, t1).mu_sphere
    branch = census.solve_branches(4, 7.0)[1]
    orbit = efcore.integrate_orbit(kind, branch.c, steps_per_period=4000)
    j_branch = curvature.yamabe_functional(4, 7.0, efcore.denormalize(4, orbit))
    j_triv_7 = curvature.yamabe_functional(4, 7.0)
    passed = j_triv_t1 < mu and j_branch < j_triv_7
    return _result("curvature", "functional_ordering", passed,
                   j_triv_7 - j_branch, 0.0,
                   note="nontrivial branch lowers the functional")


def _check_sphere_residual():
    x = np.linspace(0.05, math.pi - 0.05, 400)
    on_shell = max(
        curvature.sphere_family_residual(n, n * (n - 1.0), t, x)
        for n in (3, 4, 6) for t in (0.3, 1.0))
    off_shell = curvature.sphere_family_residual(4, 13.2, 1.0, x)
    passed = on_shell <= 1e-8 and off_shell > 1e-2
    return _result("curvature", "sphere_residual", passed, on_shell, 1e-8,
                   note=f"off-shell residual {off_shell:.3e}")


def _check_codazzi_identity():
    worst = 0.0
    for n in (3, 4, 7):
        for trace in (0.5, 2.0):
            for psi in (-0.3, 0.8):
                lam, mu = curvature.codazzi_pair(n, trace, psi)
                worst = max(worst, abs(lam + (n - 1.0) * mu - trace)
                            / max(1.0, abs(trace)))
    return _result("curvature", "codazzi_identity", worst <= 1e-12,
                   worst, 1e-12)


# ------------------------------------------------------------------ cli

def _check_cli_determinism():
    from pseudocyl import cli
    payloads = []
    for _ in range(2):
        chunk = []
        for argv in (["period", "--n", "4", "--c", "0.09"],
                     ["derdzinski", "--n", "8", "--C", "1", "--R", "42",
                      "--T", "10", "--format", "json"]):
            sink = io.StringIO()
            code = cli.execute(argv, sink)
            chunk.append((code, sink.getvalue()))
        payloads.append(chunk)
    codes_ok = all(code == 0 for chunk in payloads for code, _ in chunk)
    identical = payloads[0] == payloads[1]
    nonempty = all(text for _, text in payloads[0])
    passed = codes_ok and identical and nonempty
    return _result("cli", "determinism", passed, 0.0 if passed else 1.0, 0.0,
                   note="byte-identical output on repeated runs")


def _check_cli_round_trip():
    from pseudocyl import cli
    sink = io.StringIO()
    code = cli.execute(["branches", "--n", "4", "--T", "10",
                        "--format", "json"], sink)
    data = json.loads(sink.getvalue())
    kind = efcore.SystemKind.emden_fowler(4)
    worst = 0.0
    for row in data["branches"]:
        if row["j"] == 0 or not row["resolved"]:
            continue
        worst = max(worst,
                    abs(row["j"] * period_u(kind, row["c"]) - 10.0))
    passed = code == 0 and data["count"] == 3 and worst <= 1e-8
    return _result("cli", "round_trip", passed, worst, 1e-8,
                   note="reported energies reproduce the circle length")


_CHECKS = {
    "efcore": [
        _check_constant_identity,
        _check_energy_conservation,
        _check_turning_consistency,
        _check_homoclinic_residual,
        _check_denormalize_scaling,
    ],
    "period": [
        _check_small_energy_limit,
        _check_divergence_monotone,
        _check_derivative_fd,
        _check_quadrature_stability,
    ],
    "census": [
        _check_consistency_count,
        _check_orbit_return,
        _check_boundary_collapse,
        _check_derd4_isochronous,
        _check_monotone_energies,
    ],
    "ellip": [
        _check_dn_identity,
        _check_period_agreement_n4,
        _check_period_agreement_weier,
        _check_closed_vs_integrated,
        _check_laurent_tail,
        _check_curve_window,
        _check_bound_validity,
        _check_homoclinic_bounds,
    ],
    "curvature": [
        _check_scalar_constancy,
        _check_trace_audit,
        _check_witness_structure,
        _check_pohozaev_properties,
        _check_functional_ordering,
        _check_sphere_residual,
        _check_codazzi_identity,
    ],
    "cli": [
        _check_cli_determinism,
        _check_cli_round_trip,
    ],
}


def run_checks(modules: list[str] | None = None) -> list[CheckResult]:
    """Run the self-check suite, optionally restricted to named modules."""
    if modules is None:
        selected = list(_CHECKS)
    else:
        unknown = [m for m in modules if m not in _CHECKS]
        if unknown:
            raise ValueError(
                f"unknown module(s) {unknown}; valid: {sorted(_CHECKS)}")
        selected = list(dict.fromkeys(modules))
    results = []
    for module in selected:
        for check in _CHECKS[module]:
            results.append(check())
    return results
