"""Modular q-series machinery and Legendre-type special functions."""

from fractions import Fraction

import mpmath
import pytest
from mpmath import mp, mpc, mpf

from updownlab import (
    CMPoint,
    HalfPlanePoint,
    PoleError,
    PrecisionContext,
    alpha_n,
    dedekind_eta,
    eichler_e4_tilde,
    eisenstein_e4,
    j_invariant,
    legendre_p,
    legendre_ramanujan_r,
    re_eichler_closed_form,
    reflection_residual,
    satisfies_region,
)
from updownlab.modular import legendre_p_dt, legendre_p_quadrature
from updownlab.numerics import DomainError

from conftest import random_points


class TestCMPoint:
    def test_from_string_forms(self):
        assert CMPoint.from_string("i") == CMPoint(1, 0, 1)
        assert CMPoint.from_string("2*i") == CMPoint(1, 0, 4)
        assert CMPoint.from_string("sqrt(2)*i") == CMPoint(1, 0, 2)
        assert CMPoint.from_string("1/2+1/2*sqrt(7)*i") == CMPoint(1, -1, 2)
        assert CMPoint.from_string("-1/8+1/8*sqrt(15)*i") == CMPoint(4, 1, 1)

    def test_disc(self):
        assert CMPoint.from_string("i").disc == -4
        assert CMPoint.from_string("1/2+1/2*sqrt(7)*i").disc == -7
        assert CMPoint.from_string("-1/8+1/8*sqrt(15)*i").disc == -15

    def test_to_point(self, ctx30):
        z = CMPoint.from_string("1/2+1/2*sqrt(7)*i").to_point(ctx30)
        with ctx30.working():
            assert abs(z - mpc(mpf(1) / 2, mpmath.sqrt(7) / 2)) < ctx30.tol

    @pytest.mark.parametrize("bad", ["", "x", "1+2j", "1/2-1/2*sqrt(7)*i",
                                     "sqrt(-3)*i"])
    def test_rejects_garbage(self, bad):
        with pytest.raises(DomainError):
            CMPoint.from_string(bad)

    def test_coefficient_validation(self):
        with pytest.raises(DomainError):
            CMPoint(-1, 0, -1)   # leading coefficient must be positive
        with pytest.raises(DomainError):
            CMPoint(1, 0, -1)    # real roots
        with pytest.raises(DomainError):
            CMPoint(2, 0, 2)     # not primitive

    def test_from_rational_reduces(self):
        p = CMPoint.from_rational(Fraction(1, 2), Fraction(7, 4))
        assert (p.A, p.B, p.C) == (1, -1, 2)

    def test_halfplane_point(self):
        assert HalfPlanePoint(0, 1).to_mpc() == mpc(0, 1)
        with pytest.raises(DomainError):
            HalfPlanePoint(0, -1)


class TestDedekindEta:
    def test_eta_i_closed_form(self, ctx40):
        # eta(i) = Gamma(1/4) / (2 pi^(3/4)).
        with ctx40.working():
            expected = mpmath.gamma(mpf(1) / 4) / (2 * mp.pi ** (mpf(3) / 4))
            got = dedekind_eta(mpc(0, 1), ctx40)
            assert abs(got - expected) < ctx40.tol

    def test_translation(self, ctx30):
        with ctx30.working():
            for z in random_points(3, seed=11):
                lhs = dedekind_eta(z + 1, ctx30)
                rhs = mpmath.exp(1j * mp.pi / 12) * dedekind_eta(z, ctx30)
                assert abs(lhs - rhs) < ctx30.tol

    def test_inversion(self, ctx30):
        with ctx30.working():
            for z in random_points(3, seed=12):
                lhs = dedekind_eta(-1 / z, ctx30)
                rhs = mpmath.sqrt(-1j * z) * dedekind_eta(z, ctx30)
                assert abs(lhs - rhs) < ctx30.tol


class TestEisensteinE4:
    def test_against_theta_functions(self, ctx30):
        # E4 = (theta2^8 + theta3^8 + theta4^8) / 2 at nome q = e^(i pi z).
        with ctx30.working():
            for z in random_points(4, seed=13):
                q = mpmath.exp(1j * mp.pi * z)
                expected = (mpmath.jtheta(2, 0, q) ** 8
                            + mpmath.jtheta(3, 0, q) ** 8
                            + mpmath.jtheta(4, 0, q) ** 8) / 2
                assert abs(eisenstein_e4(z, ctx30) - expected) < ctx30.tol

    def test_weight_four_inversion(self, ctx30):
        with ctx30.working():
            z = mpc("0.21", "0.93")
            lhs = eisenstein_e4(-1 / z, ctx30)
            rhs = z**4 * eisenstein_e4(z, ctx30)
            assert abs(lhs - rhs) < 10 * ctx30.tol


class TestJInvariant:
    def test_special_values(self, ctx30):
        with ctx30.working():
            assert abs(j_invariant(mpc(0, 1), ctx30) - 1728) < ctx30.tol
            z3 = mpc(mpf(1) / 2, mpmath.sqrt(3) / 2)
            assert abs(j_invariant(z3, ctx30)) < ctx30.tol
            assert abs(j_invariant(mpc(0, 2), ctx30) - 66**3) < 1e-20

    def test_modular_invariance(self, ctx30):
        with ctx30.working():
            z = mpc("0.3", "1.1")
            assert abs(j_invariant(z, ctx30)
                       - j_invariant(-1 / z, ctx30)) < 10 * ctx30.tol
            assert abs(j_invariant(z, ctx30)
                       - j_invariant(z + 1, ctx30)) < 10 * ctx30.tol


class TestAlphaN:
    @pytest.mark.parametrize("level", [2, 3, 4])
    def test_functional_equation(self, level, ctx30):
        # alpha_N(z) + alpha_N(-1/(N z)) = 1.
        with ctx30.working():
            for z in random_points(20, seed=100 + level):
                total = alpha_n(z, level, ctx30) \
                    + alpha_n(-1 / (level * z), level, ctx30)
                assert abs(total - 1) < 10 * ctx30.tol

    def test_invalid_level(self, ctx30):
        with pytest.raises(DomainError):
            alpha_n(mpc(0, 1), 5, ctx30)

    def test_lower_half_plane_rejected(self, ctx30):
        with pytest.raises(DomainError):
            alpha_n(mpc(0, -1), 2, ctx30)


class TestEichlerIntegral:
    def test_anchor_fifteen_over_sixteen(self, ctx30):
        with ctx30.working():
            z = mpc(mpf(9) / 16, mpmath.sqrt(15) / 16)
            got = eichler_e4_tilde(z, ctx30).real
            assert abs(got - mpf(387) / 2048) < ctx30.tol

    def test_anchor_fifteen_over_four(self, ctx30):
        with ctx30.working():
            z = mpc(mpf(-7) / 4, mpmath.sqrt(15) / 4)
            got = eichler_e4_tilde(z, ctx30).real
            assert abs(got + mpf(1) / 32) < ctx30.tol

    def test_closed_form_half_integer_real_part(self, ctx30):
        with ctx30.working():
            z = mpc("0.5", "1.1")
            assert re_eichler_closed_form(z, ctx30) == 0
            assert abs(eichler_e4_tilde(z, ctx30).real) < ctx30.tol

    def test_closed_form_reflected_branch(self, ctx30):
        # 2 Re(1/z) = 1 on the circle |z - 1| = 1; z = 0.4 + 0.8i lies on it.
        with ctx30.working():
            z = mpc("0.4", "0.8")
            got = re_eichler_closed_form(z, ctx30)
            assert abs(got - eichler_e4_tilde(z, ctx30).real) < ctx30.tol

    def test_closed_form_rejects_generic_points(self, ctx30):
        with pytest.raises(DomainError):
            re_eichler_closed_form(mpc("0.21", "0.9"), ctx30)

    def test_reflection_residual_random(self, ctx40):
        for z in random_points(10, seed=17):
            assert reflection_residual(z, ctx40) < mpf(10) ** -35


class TestLegendreFunctions:
    NUS = [Fraction(-1, 4), Fraction(-1, 3), Fraction(-1, 2)]

    @pytest.mark.parametrize("nu", NUS)
    def test_against_quadrature(self, nu, ctx30):
        with ctx30.working():
            for t in (mpf("0.23"), mpf("-0.4"), mpc("0.3", "0.4"),
                      mpc("-1.2", "0.7")):
                a = legendre_p(nu, t, ctx30)
                b = legendre_p_quadrature(nu, t, ctx30)
                # The quadrature has endpoint singularities, so it only
                # certifies a moderate number of digits.
                assert abs(a - b) < mpf(10) ** -10

    def test_elliptic_integral_special_case(self, ctx40):
        # P_{-1/2}(1 - 2t) = (2/pi) K(t) in the parameter convention.
        with ctx40.working():
            for t in (mpf("0.1"), mpf("0.37"), mpf("0.81")):
                lhs = legendre_p(Fraction(-1, 2), t, ctx40)
                rhs = 2 / mp.pi * mpmath.ellipk(t)
                assert abs(lhs - rhs) < ctx40.tol

    @pytest.mark.parametrize("nu", NUS)
    def test_derivative_against_finite_difference(self, nu, ctx30):
        with ctx30.working():
            t = mpf("0.31")
            h = mpf(10) ** -12
            fd = (legendre_p(nu, t + h, ctx30)
                  - legendre_p(nu, t - h, ctx30)) / (2 * h)
            assert abs(legendre_p_dt(nu, t, ctx30) - fd) < mpf(10) ** -20

    def test_cut_rejected(self, ctx30):
        with pytest.raises(DomainError):
            legendre_p(Fraction(-1, 2), mpf(2), ctx30)

    def test_bad_degree_rejected(self, ctx30):
        with pytest.raises(DomainError):
            legendre_p(Fraction(-1, 5), mpf("0.2"), ctx30)
        with pytest.raises(DomainError):
            legendre_ramanujan_r(Fraction(1, 2), mpf("0.5"), ctx30)


class TestLegendreRamanujanR:
    def test_continuity_across_real_axis(self, ctx30):
        # The Richardson limit on the line |xi| > 1 must agree with nearby
        # off-axis evaluations.
        with ctx30.working():
            xi = mpf("3.7")
            on_line = legendre_ramanujan_r(Fraction(-1, 2), xi, ctx30)
            near = legendre_ramanujan_r(
                Fraction(-1, 2), mpc(xi, mpf(10) ** -10), ctx30)
            # The off-axis value differs from the limit by O(offset).
            assert abs(on_line - near) < mpf(10) ** -8

    @pytest.mark.parametrize("nu", [Fraction(-1, 4), Fraction(-1, 3),
                                    Fraction(-1, 2)])
    def test_precision_escalation(self, nu):
        lo = legendre_ramanujan_r(nu, mpf("2.5"), PrecisionContext(digits=25))
        hi = legendre_ramanujan_r(nu, mpf("2.5"), PrecisionContext(digits=40))
        assert abs(lo - hi) < mpf(10) ** -20


class TestAdmissibleRegion:
    def test_known_anchors(self, ctx30):
        with ctx30.working():
            z1 = mpc(mpf(-1) / 8, mpmath.sqrt(15) / 8)
            z2 = mpc(mpf(-7) / 16, mpmath.sqrt(15) / 16)
            assert satisfies_region(z1, 4, ctx30)
            assert satisfies_region(z2, 4, ctx30)

    def test_excluded_disks(self, ctx30):
        with ctx30.working():
            # Deep inside the disk |z - 1/N| < 1/N.
            assert not satisfies_region(mpc("0.25", "0.05"), 4, ctx30)
            assert not satisfies_region(mpc("-0.25", "0.05"), 4, ctx30)

    def test_strip_bound(self, ctx30):
        assert not satisfies_region(mpc("0.8", "1.0"), 2, ctx30)

    def test_invalid_level(self, ctx30):
        with pytest.raises(DomainError):
            satisfies_region(mpc(0, 1), 7, ctx30)
