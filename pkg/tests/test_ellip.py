"""Tests for the elliptic special functions and closed-form profiles.

Scalar reference values are frozen from a 50-digit arbitrary-precision
computation; the batteries cross-check the AGM/Landen implementations
against scipy's independent routines.
"""

import math

import numpy as np
import pytest
import scipy.special

from pseudocyl.efcore import SystemKind, structural_constants, turning_points
from pseudocyl.ellip import (
    ClosedForm,
    CurveClass,
    WeierstrassBranch,
    closed_form,
    curve_class,
    elliptic_K,
    estimate_bounds,
    evaluate_closed_form,
    jacobi_dn,
    raw_energy,
    real_period,
    weierstrass_p,
)
from pseudocyl.period import period_u

EF = SystemKind.emden_fowler


class TestEllipticK:
    def test_lemniscatic_value(self):
        assert elliptic_K(1.0 / math.sqrt(2.0)) == pytest.approx(
            1.8540746773013719184, rel=1e-15)

    def test_degenerate_endpoint(self):
        assert elliptic_K(0.0) == pytest.approx(math.pi / 2.0, rel=1e-15)

    @pytest.mark.parametrize("k", [0.05, 0.3, 0.6, 0.9, 0.99])
    def test_against_scipy(self, k):
        assert elliptic_K(k) == pytest.approx(
            scipy.special.ellipk(k * k), rel=1e-14)

    def test_extreme_modulus(self):
        # scipy's parameterization squares the modulus and loses ~1e-12 of
        # relative accuracy this close to 1; the AGM from k itself does not
        assert elliptic_K(0.999999) == pytest.approx(
            7.947479773547967032666, rel=1e-15)

    def test_validation(self):
        for bad in (-0.1, 1.0, 1.5):
            with pytest.raises(ValueError):
                elliptic_K(bad)


class TestJacobiDn:
    @pytest.mark.parametrize("k", [0.1, 0.5, 0.8660254037844386, 0.99])
    def test_against_scipy(self, k):
        for x in np.linspace(-7.0, 7.0, 113):
            _, _, dn, _ = scipy.special.ellipj(x, k * k)
            assert jacobi_dn(float(x), k) == pytest.approx(dn, abs=1e-12)

    @pytest.mark.parametrize("k", [0.3, 0.8660254037844386, 0.999])
    def test_quarter_period_value(self, k):
        # dn(K) = k' exactly; the quotient form of the Landen unwind loses
        # this point entirely, the sum-of-squares form holds it
        kp = math.sqrt((1.0 - k) * (1.0 + k))
        assert jacobi_dn(elliptic_K(k), k) == pytest.approx(kp, rel=1e-13)

    def test_limiting_moduli(self):
        assert jacobi_dn(1.3, 0.0) == 1.0
        assert jacobi_dn(1.3, 1.0) == pytest.approx(1.0 / math.cosh(1.3),
                                                    rel=1e-15)

    def test_periodicity(self):
        k = 0.7
        big_k = elliptic_K(k)
        for x in (0.4, 1.1, 2.9):
            assert jacobi_dn(x + 2.0 * big_k, k) == pytest.approx(
                jacobi_dn(x, k), abs=1e-13)

    def test_validation(self):
        with pytest.raises(ValueError):
            jacobi_dn(1.0, -0.2)
        with pytest.raises(ValueError):
            jacobi_dn(1.0, 1.2)


class TestWeierstrassP:
    def test_reference_values_equianharmonic_axis(self):
        assert weierstrass_p(0.5, 4.0 / 3.0, 0.0)[0] == pytest.approx(
            4.01668982966246863, rel=1e-14)
        assert weierstrass_p(1.2, 4.0 / 3.0, 0.0)[0] == pytest.approx(
            0.794964154419527455, rel=1e-14)

    def test_real_period_reference(self):
        assert real_period(4.0 / 3.0, 0.0) == pytest.approx(
            3.45082180766962799124, rel=1e-14)

    @pytest.mark.parametrize("branch", list(WeierstrassBranch))
    def test_satisfies_the_differential_equation(self, branch):
        g2, g3 = 4.0 / 3.0, -0.2
        for x in (0.3, 0.8, 1.4):
            p, pp = weierstrass_p(x, g2, g3, branch)
            assert pp * pp == pytest.approx(4.0 * p**3 - g2 * p - g3,
                                            rel=1e-10)

    def test_branch_value_ranges(self):
        g2, g3 = 4.0 / 3.0, -0.2
        e1, e2, e3 = sorted(np.roots([4.0, 0.0, -g2, -g3]).real,
                            reverse=True)
        for x in np.linspace(0.1, 3.0, 17):
            p_ax, _ = weierstrass_p(float(x), g2, g3,
                                    WeierstrassBranch.REAL_AXIS)
            p_bd, _ = weierstrass_p(float(x), g2, g3,
                                    WeierstrassBranch.BOUNDED)
            assert p_ax >= e1 - 1e-12
            assert e3 - 1e-12 <= p_bd <= e2 + 1e-12

    def test_accepts_branch_as_string(self):
        by_enum = weierstrass_p(0.7, 4.0 / 3.0, 0.0,
                                WeierstrassBranch.BOUNDED)
        by_name = weierstrass_p(0.7, 4.0 / 3.0, 0.0, "bounded")
        assert by_enum == by_name

    def test_pole_guards(self):
        g2, g3 = 4.0 / 3.0, 0.0
        with pytest.raises(ValueError, match="pole"):
            weierstrass_p(0.0, g2, g3)
        with pytest.raises(ValueError, match="pole"):
            weierstrass_p(real_period(g2, g3), g2, g3)

    def test_degenerate_cubics_rejected(self):
        with pytest.raises(ValueError, match="degenerate cubic"):
            weierstrass_p(0.5, 1.0, 1.0)
        with pytest.raises(ValueError, match="degenerate cubic"):
            weierstrass_p(0.5, -1.0, 0.0)


class TestRawEnergy:
    def test_reference_values(self):
        assert raw_energy(3, 0.05) == pytest.approx(
            -0.0817912881351969833, rel=1e-14)
        assert raw_energy(6, 1.0 / 12.0) == pytest.approx(-8.0 / 27.0,
                                                          rel=1e-15)

    @pytest.mark.parametrize("n", [3, 4, 6, 9])
    def test_window(self, n):
        cons = structural_constants(EF(n))
        lowest = -2.0 * cons.alpha**2 * cons.beta**2 / n
        assert raw_energy(n, 0.0) == pytest.approx(lowest, rel=1e-14)
        assert raw_energy(n, 1.0 / n) == 0.0

    def test_validation(self):
        with pytest.raises(ValueError):
            raw_energy(4, -0.01)
        with pytest.raises(ValueError):
            raw_energy(4, 0.26)


class TestClosedFormQuartic:
    def test_parameters(self):
        form = closed_form(4, 0.09)
        assert isinstance(form, ClosedForm)
        assert form.variant == "jacobi_dn"
        # squared modulus 4 sqrt(c) / (1 + 2 sqrt(c)) = 0.75 at c = 0.09
        assert form.modulus**2 == pytest.approx(0.75, rel=1e-14)
        assert form.scale == form.time_scale == pytest.approx(
            math.sqrt(0.8), rel=1e-14)
        assert form.cbar == pytest.approx(-0.16, rel=1e-14)

    def test_peak_and_trough_hit_the_turning_points(self):
        form = closed_form(4, 0.09)
        cons = structural_constants(EF(4))
        a, b = turning_points(EF(4), 0.09)
        big_k = elliptic_K(form.modulus)
        assert evaluate_closed_form(form, 0.0) == pytest.approx(
            cons.alpha * b, rel=1e-14)
        assert evaluate_closed_form(form, big_k / form.time_scale) \
            == pytest.approx(cons.alpha * a, rel=1e-13)

    def test_period_matches_the_quadrature(self):
        form = closed_form(4, 0.09)
        r_period = 2.0 * elliptic_K(form.modulus) / form.time_scale
        assert r_period == pytest.approx(period_u(EF(4), 0.09), rel=1e-11)

    def test_no_singular_branch(self):
        with pytest.raises(ValueError, match="singular"):
            evaluate_closed_form(closed_form(4, 0.09), 0.5, singular=True)


class TestClosedFormSextic:
    def test_equianharmonic_energy_zeroes_g3(self):
        form = closed_form(6, 1.0 / 12.0)
        assert form.variant == "weierstrass_offset"
        assert form.g2 == pytest.approx(4.0 / 3.0, rel=1e-15)
        assert form.g3 == 0.0
        e1, e2, e3 = form.roots
        assert e1 == pytest.approx(1.0 / math.sqrt(3.0), rel=1e-12)
        assert abs(e2) < 1e-15
        assert e3 == pytest.approx(-1.0 / math.sqrt(3.0), rel=1e-12)

    def test_profile_spans_the_turning_points(self):
        form = closed_form(6, 0.12)
        cons = structural_constants(EF(6))
        a, b = turning_points(EF(6), 0.12)
        rp = real_period(form.g2, form.g3, roots=form.roots)
        assert evaluate_closed_form(form, 0.0) == pytest.approx(
            cons.alpha * b, rel=1e-13)
        assert evaluate_closed_form(form, rp / 2.0) == pytest.approx(
            cons.alpha * a, rel=1e-12)

    def test_period_matches_the_quadrature(self):
        form = closed_form(6, 0.12)
        rp = real_period(form.g2, form.g3, roots=form.roots)
        assert rp == pytest.approx(period_u(EF(6), 0.12), rel=1e-10)

    def test_singular_branch_is_real(self):
        form = closed_form(6, 0.12)
        u_sing = evaluate_closed_form(form, 0.4, singular=True)
        assert math.isfinite(u_sing)
        assert u_sing < 0.0  # offset minus the unbounded branch


class TestClosedFormCubic:
    def test_parameters(self):
        form = closed_form(3, 0.05)
        assert form.variant == "weierstrass_inv_sqrt"
        assert form.g2 == pytest.approx(1.0 / 12.0, rel=1e-15)
        assert form.g3 == pytest.approx(0.00206018518518518519, rel=1e-13)
        assert form.cbar == pytest.approx(-0.0817912881351969833, rel=1e-14)
        assert form.roots == pytest.approx(
            (0.155395482300229, -0.0255200026609588, -0.12987547963927),
            rel=1e-12)

    def test_profile_values(self):
        form = closed_form(3, 0.05)
        anchors = {0.0: 0.866827443202515115,
                   1.0: 0.801921647674006208,
                   2.3: 0.660205622724547395}
        for r, ref in anchors.items():
            assert evaluate_closed_form(form, r) == pytest.approx(
                ref, rel=1e-12)

    def test_trough_hits_the_inner_turning_point(self):
        form = closed_form(3, 0.05)
        cons = structural_constants(EF(3))
        a, _ = turning_points(EF(3), 0.05)
        rp = real_period(form.g2, form.g3, roots=form.roots)
        assert evaluate_closed_form(form, rp / 2.0) == pytest.approx(
            cons.alpha * a, rel=1e-12)

    def test_period_matches_the_quadrature(self):
        form = closed_form(3, 0.05)
        rp = real_period(form.g2, form.g3, roots=form.roots)
        assert rp == pytest.approx(period_u(EF(3), 0.05), rel=1e-10)

    def test_no_real_singular_branch(self):
        with pytest.raises(ValueError, match="not real"):
            evaluate_closed_form(closed_form(3, 0.05), 0.5, singular=True)


class TestClosedFormEndpoints:
    # the inverse-square-root variant divides by cbar ~ 1e-10 at this
    # depth, so its peak value is conditioning-limited near 1e-7; the
    # other variants stay at full precision
    @pytest.mark.parametrize("n,tol", [(3, 1e-7), (4, 1e-9), (6, 1e-9)])
    def test_near_homoclinic_parameters_still_evaluate(self, n, tol):
        # at 1e-9 below the homoclinic energy the turning-point-factored
        # roots keep the construction alive even though the cubic
        # discriminant has sunk below float rounding noise
        c = (1.0 / n) * (1.0 - 1e-9)
        form = closed_form(n, c)
        cons = structural_constants(EF(n))
        _, b = turning_points(EF(n), c)
        assert evaluate_closed_form(form, 0.0) == pytest.approx(
            cons.alpha * b, rel=tol)

    @pytest.mark.parametrize("n", [3, 4])
    def test_modulus_cap_rejects_the_last_decade(self, n):
        with pytest.raises(ValueError, match="modulus degeneracy"):
            closed_form(n, (1.0 / n) * (1.0 - 1e-10))

    def test_sextic_modulus_never_degenerates(self):
        # the sextic root gap closes like the square root of the distance
        # to the homoclinic energy, so every representable energy below
        # 1/6 keeps the modulus well under the cap
        form = closed_form(6, (1.0 / 6.0) * (1.0 - 1e-12))
        e1, e2, e3 = form.roots
        assert (e2 - e3) / (e1 - e3) < 1.0 - 1e-7

    @pytest.mark.parametrize("n", [3, 4, 6])
    def test_small_energy_flattens_to_the_equilibrium(self, n):
        form = closed_form(n, 1e-8)
        cons = structural_constants(EF(n))
        assert evaluate_closed_form(form, 0.0) == pytest.approx(
            cons.alpha, rel=1e-3)

    def test_factored_roots_match_the_generic_solve_in_the_interior(self):
        from pseudocyl.ellip import _cubic_roots
        for n, c in ((3, 0.05), (6, 0.12)):
            form = closed_form(n, c)
            generic = _cubic_roots(form.g2, form.g3)
            assert form.roots == pytest.approx(generic, abs=1e-13)

    def test_energy_window_validation(self):
        for bad in (0.0, 0.25, -0.1):
            with pytest.raises(ValueError):
                closed_form(4, bad)


class TestCurveClass:
    @pytest.mark.parametrize("n,expected", [
        (3, ("elliptic", 1, False)),
        (4, ("elliptic", 1, False)),
        (6, ("elliptic", 1, False)),
        (5, ("hyperelliptic", 2, False)),
        (7, ("hyperelliptic", 3, False)),
        (8, ("hyperelliptic", 2, True)),
        (9, ("hyperelliptic", 4, False)),
        (12, ("hyperelliptic", 3, True)),
    ])
    def test_classification_table(self, n, expected):
        cc = curve_class(n)
        assert isinstance(cc, CurveClass)
        assert (cc.kind, cc.genus, cc.automorphic) == expected

    def test_no_closed_form_outside_the_elliptic_dimensions(self):
        with pytest.raises(ValueError, match="curve_class"):
            closed_form(5, 0.1)

    def test_validation(self):
        with pytest.raises(ValueError):
            curve_class(2)


class TestEstimateBounds:
    def test_interior_energy(self):
        eb = estimate_bounds(4, 0.09)
        # amplitude bound equals alpha * b = sqrt(0.8) exactly
        assert eb.C_n == pytest.approx(0.894427190999915879, rel=1e-14)
        assert eb.C_n_prime == pytest.approx(1.06619440911691174, abs=1e-8)
        assert eb.T == pytest.approx(period_u(EF(4), 0.09), rel=1e-11)

    def test_homoclinic_energy(self):
        eb = estimate_bounds(4, 0.25)
        assert eb.C_n == 1.0
        assert eb.T == math.inf
        # sup |beta v + v'| of the homoclinic profile is 3 sqrt(3) / 4
        assert eb.C_n_prime == pytest.approx(3.0 * math.sqrt(3.0) / 4.0,
                                             abs=1e-8)

    def test_amplitude_bound_grows_with_energy(self):
        values = [estimate_bounds(4, c).C_n for c in (0.05, 0.1, 0.2, 0.25)]
        assert values == sorted(values)
        assert values[-1] == 1.0

    def test_validation(self):
        with pytest.raises(ValueError):
            estimate_bounds(4, 0.0)
        with pytest.raises(ValueError):
            estimate_bounds(4, 0.26)
