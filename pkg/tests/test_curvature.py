"""Tests for the curvature diagnostics of the cylinder metrics."""

import math

import numpy as np
import pytest

from pseudocyl.curvature import (
    CurvatureReport,
    ReferenceConstants,
    RicciComponents,
    codazzi_pair,
    nonparallel_witness,
    pohozaev,
    reference_constants,
    ricci_components,
    sign_audit,
    sphere_family_residual,
    witness_value,
    yamabe_functional,
)
from pseudocyl.efcore import (
    SystemKind,
    denormalize,
    integrate_orbit,
    structural_constants,
    turning_points,
)

EF = SystemKind.emden_fowler


def physical_orbit(n, c, steps=2000):
    return denormalize(n, integrate_orbit(EF(n), c, steps_per_period=steps))


class TestRicciComponents:
    def test_sign_audit_separates_the_transcriptions(self):
        audit = sign_audit(4)
        assert audit.corrected_residual <= 1e-12
        assert audit.printed_residual > 0.3
        assert "trace identity" in audit.note

    @pytest.mark.parametrize("n", [3, 4, 6, 9])
    def test_scalar_is_constant_on_shell(self, n):
        # substituting the profile equation for u'' must give scalar
        # curvature n (n-1) identically along any orbit
        orbit = physical_orbit(n, 0.05 / n * n * 0.6)
        beta_sq = ((n - 2.0) / 2.0) ** 2
        for i in range(0, len(orbit.t), 97):
            u, up = float(orbit.w[i]), float(orbit.wp[i])
            upp = beta_sq * u - (n * (n - 2.0) / 4.0) \
                * u ** ((n + 2.0) / (n - 2.0))
            comp = ricci_components(n, u, up, upp)
            assert comp.scalar == pytest.approx(n * (n - 1.0), abs=1e-12)

    def test_trace_identity_off_shell(self):
        comp = ricci_components(4, 1.1, 0.3, -0.2)
        assert isinstance(comp, RicciComponents)
        conf = 1.1 ** (-2.0)
        assert comp.scalar == pytest.approx(
            conf * (comp.R00 + 3.0 * comp.Rij_coeff), rel=1e-14)

    def test_mixed_component_vanishes(self):
        assert ricci_components(5, 0.9, 0.2, 0.1).R0i == 0.0

    def test_validation(self):
        with pytest.raises(ValueError):
            ricci_components(2, 1.0, 0.0, 0.0)
        with pytest.raises(ValueError):
            ricci_components(4, 0.0, 0.0, 0.0)


class TestWitness:
    def test_peak_value_reference(self):
        rep = nonparallel_witness(4, physical_orbit(4, 0.09, steps=2000))
        assert isinstance(rep, CurvatureReport)
        assert rep.max_witness == pytest.approx(3.5309434012829421, abs=1e-6)

    def test_peak_converges_with_resolution(self):
        converged = 3.5309434012829421
        err_2k = abs(nonparallel_witness(
            4, physical_orbit(4, 0.09, 2000)).max_witness - converged)
        err_8k = abs(nonparallel_witness(
            4, physical_orbit(4, 0.09, 8000)).max_witness - converged)
        assert err_8k < err_2k / 10.0

    def test_vanishes_exactly_at_turning_points(self):
        # every term of the witness carries a factor u', so the zeros at
        # the turning points are algebraic, not numerical
        cons = structural_constants(EF(4))
        a, b = turning_points(EF(4), 0.09)
        assert witness_value(4, cons.alpha * a, 0.0) == 0.0
        assert witness_value(4, cons.alpha * b, 0.0) == 0.0

    def test_degenerate_branch_has_zero_witness(self):
        orbit = physical_orbit(4, 0.0)
        values = witness_value(4, orbit.w, orbit.wp)
        assert float(np.max(np.abs(values))) <= 1e-13

    def test_profile_pairs_match_the_arrays(self):
        rep = nonparallel_witness(4, physical_orbit(4, 0.09))
        t0, v0 = rep.witness_profile[0]
        assert t0 == float(rep.witness_t[0])
        assert v0 == float(rep.witness_values[0])

    def test_report_carries_the_integral_diagnostics(self):
        rep = nonparallel_witness(4, physical_orbit(4, 0.09))
        assert rep.pohozaev == pytest.approx(pohozaev(4, 0.09), rel=1e-15)
        assert rep.yamabe_J > 0.0

    def test_requires_physical_time(self):
        with pytest.raises(ValueError, match="physical-time"):
            nonparallel_witness(4, integrate_orbit(EF(4), 0.09))

    def test_requires_matching_conformal_family(self):
        with pytest.raises(ValueError, match="dimension 4"):
            nonparallel_witness(4, physical_orbit(5, 0.05))
        derd = integrate_orbit(SystemKind.derdzinski(4), 0.1)
        with pytest.raises(ValueError):
            nonparallel_witness(4, derd)


class TestPohozaev:
    def test_zero_on_the_degenerate_branch(self):
        assert pohozaev(4, 0.0) == 0.0

    def test_reference_value(self):
        assert pohozaev(3, 1.0 / 3.0) == pytest.approx(
            32.0 * math.pi / 3.0, abs=1e-10)

    def test_linear_in_the_energy(self):
        assert pohozaev(4, 0.2) == pytest.approx(2.0 * pohozaev(4, 0.1),
                                                 rel=1e-15)

    def test_validation(self):
        with pytest.raises(ValueError):
            pohozaev(4, -0.001)
        with pytest.raises(ValueError):
            pohozaev(4, 0.251)


class TestYamabeFunctional:
    def test_trivial_profile_reference_values(self):
        t1 = 2.0 * math.pi / math.sqrt(2.0)
        assert yamabe_functional(4, t1) == pytest.approx(
            56.1886446179121633, rel=1e-14)
        assert yamabe_functional(4, 7.0) == pytest.approx(
            70.5285801512339871, rel=1e-14)

    def test_orbit_route_agrees_on_the_degenerate_branch(self):
        orbit = physical_orbit(4, 0.0)
        span = float(orbit.t[-1])
        assert yamabe_functional(4, span, orbit) == pytest.approx(
            yamabe_functional(4, span), rel=1e-12)

    def test_nontrivial_branch_lowers_the_functional(self):
        # the singly wound branch on the 7-circle sits at this energy
        orbit = physical_orbit(4, 0.23477379762275558, steps=4000)
        j = yamabe_functional(4, 7.0, orbit)
        assert j == pytest.approx(61.2164678981550163, abs=1e-6)
        assert j < yamabe_functional(4, 7.0)

    def test_scale_invariance_of_the_orbit_route(self):
        orbit = physical_orbit(4, 0.09)
        span = float(orbit.t[-1])
        j = yamabe_functional(4, span, orbit)
        scaled = type(orbit)(orbit.kind, orbit.c, orbit.t, 3.0 * orbit.w,
                             3.0 * orbit.wp, orbit.energy_drift,
                             orbit.drift_exceeded, orbit.normalized)
        assert yamabe_functional(4, span, scaled) == pytest.approx(
            j, rel=1e-12)

    def test_span_mismatch_rejected(self):
        orbit = physical_orbit(4, 0.09)
        with pytest.raises(ValueError, match="spans"):
            yamabe_functional(4, 7.0, orbit)

    def test_coarse_sampling_rejected(self):
        # over a full period the integrands are periodic and Simpson's rule
        # super-converges, so the guard is probed on a truncated span
        orbit = physical_orbit(4, 0.09)
        sl = slice(0, 1489, 8)
        coarse = type(orbit)(orbit.kind, orbit.c, orbit.t[sl], orbit.w[sl],
                             orbit.wp[sl], orbit.energy_drift,
                             orbit.drift_exceeded, orbit.normalized)
        with pytest.raises(ValueError, match="too coarse"):
            yamabe_functional(4, float(coarse.t[-1]), coarse)

    def test_normalized_orbit_rejected(self):
        orbit = integrate_orbit(EF(4), 0.09)
        with pytest.raises(ValueError, match="physical-time"):
            yamabe_functional(4, float(orbit.t[-1]), orbit)

    def test_validation(self):
        with pytest.raises(ValueError):
            yamabe_functional(4, 0.0)
        with pytest.raises(ValueError):
            yamabe_functional(2, 1.0)


class TestReferenceConstants:
    def test_values_on_the_seven_circle(self):
        rc = reference_constants(4, 7.0)
        assert isinstance(rc, ReferenceConstants)
        assert rc.omega_nm1 == pytest.approx(2.0 * math.pi**2, rel=1e-15)
        assert rc.omega_n == pytest.approx(8.0 * math.pi**2 / 3.0, rel=1e-15)
        assert rc.J_trivial == pytest.approx(70.5285801512339871, rel=1e-14)
        assert rc.mu_sphere == pytest.approx(61.5623918477694766, rel=1e-14)
        assert rc.K2 == pytest.approx(0.0974621001542095135, rel=1e-14)
        assert rc.hv_bound == pytest.approx(0.09945112260633623, rel=1e-13)

    def test_unit_circle_gradient_bound(self):
        assert reference_constants(4, 1.0).hv_bound == pytest.approx(
            0.194924200308419, rel=1e-13)

    def test_sphere_value_beats_every_circle(self):
        # the trivial profile exceeds the spherical constant as soon as the
        # circle is long enough to admit a second branch
        rc = reference_constants(4, 7.0)
        assert rc.J_trivial > rc.mu_sphere

    def test_validation(self):
        with pytest.raises(ValueError):
            reference_constants(4, 0.0)
        with pytest.raises(ValueError):
            reference_constants(2, 1.0)


class TestCodazziPair:
    @pytest.mark.parametrize("n,trace,psi", [
        (4, 12.0, 0.3), (5, -2.0, 0.0), (7, 0.5, -1.2), (3, 1.0, 2.0),
    ])
    def test_trace_identity(self, n, trace, psi):
        lam, mu = codazzi_pair(n, trace, psi)
        # the identity cancels the decaying part exactly, so rounding is
        # set by the magnitude of that part, not of the trace
        scale = 1.0 + n * abs(trace) * math.exp(-n * psi)
        assert lam + (n - 1.0) * mu == pytest.approx(trace,
                                                     abs=1e-14 * scale)

    def test_eigenvalues_split(self):
        lam, mu = codazzi_pair(4, 12.0, 0.3)
        assert lam != pytest.approx(mu)

    def test_flat_profile_gives_degenerate_pair(self):
        # psi -> inf kills the decaying part, leaving the isotropic tensor
        lam, mu = codazzi_pair(4, 12.0, 50.0)
        assert lam == pytest.approx(3.0, rel=1e-12)
        assert mu == pytest.approx(3.0, rel=1e-12)


class TestSphereFamilyResidual:
    def test_on_shell_family_solves_the_equation(self):
        x = np.linspace(0.1, math.pi - 0.1, 101)
        for t in (0.0, 0.3, 1.5):
            assert sphere_family_residual(4, 12.0, t, x) <= 1e-10

    def test_off_shell_curvature_leaves_a_residual(self):
        x = np.linspace(0.1, math.pi - 0.1, 101)
        assert sphere_family_residual(4, 10.0, 0.3, x) > 1e-3

    def test_validation(self):
        x = np.linspace(0.1, math.pi - 0.1, 11)
        with pytest.raises(ValueError):
            sphere_family_residual(4, 0.0, 0.3, x)
        with pytest.raises(ValueError):
            sphere_family_residual(4, 12.0, 0.3, [0.0, 1.0])
        with pytest.raises(ValueError):
            sphere_family_residual(4, 12.0, 0.3, [])
