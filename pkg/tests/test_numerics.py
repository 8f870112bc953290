"""Precision plumbing, exact quadratic arithmetic, and base constants."""

from fractions import Fraction

import mpmath
import pytest
from mpmath import mpf

from updownlab import (
    MixedRadicandError,
    PrecisionContext,
    QuadExpr,
    QuadraticNumber,
    embed_quadratic,
    zeta_int,
)
from updownlab.numerics import DomainError, trigamma


class TestPrecisionContext:
    def test_defaults(self):
        ctx = PrecisionContext()
        assert ctx.digits == 40 and ctx.guard == 15 and ctx.dps == 55

    def test_validation(self):
        with pytest.raises(ValueError):
            PrecisionContext(digits=5)
        with pytest.raises(ValueError):
            PrecisionContext(guard=3)
        with pytest.raises(ValueError):
            PrecisionContext(max_terms=10)

    def test_eps_and_tol(self):
        ctx = PrecisionContext(digits=20, guard=10)
        with ctx.working():
            assert ctx.eps == mpf(10) ** -30
            assert ctx.tol == mpf(10) ** -20

    def test_bumped(self):
        ctx = PrecisionContext(digits=25, guard=12)
        up = ctx.bumped()
        assert up.digits == 35 and up.guard == 12

    def test_working_scope(self):
        ctx = PrecisionContext(digits=60)
        before = mpmath.mp.dps
        with ctx.working():
            assert mpmath.mp.dps == 75
        assert mpmath.mp.dps == before


class TestQuadraticNumber:
    def test_normalization(self):
        assert QuadraticNumber(3, 0, 7).D == 1
        q = QuadraticNumber(2, 5, 1)  # sqrt(1) folds into the rational part
        assert q.a == 7 and q.b == 0

    def test_rejects_non_squarefree(self):
        with pytest.raises(ValueError):
            QuadraticNumber(1, 1, 12)
        with pytest.raises(ValueError):
            QuadraticNumber(1, 1, 0)

    def test_field_axioms_exact(self):
        p = QuadraticNumber(Fraction(1, 3), Fraction(-2, 5), 7)
        q = QuadraticNumber(4, Fraction(1, 2), 7)
        assert (p + q) - q == p
        assert (p * q) / q == p
        assert p * (q + 1) == p * q + p
        assert (p / q) * q == p

    def test_norm_and_conjugate(self):
        q = QuadraticNumber(3, 2, 5)
        assert q.norm() == 9 - 4 * 5
        assert (q * q.conjugate()).a == q.norm()
        assert (q * q.conjugate()).b == 0

    def test_mixed_radicand_rejected(self):
        with pytest.raises(MixedRadicandError):
            QuadraticNumber(0, 1, 2) + QuadraticNumber(0, 1, 3)

    def test_mixing_with_rationals_allowed(self):
        q = QuadraticNumber(0, 1, 2) + Fraction(1, 2)
        assert q == QuadraticNumber(Fraction(1, 2), 1, 2)
        assert 3 * QuadraticNumber(1, 1, 2) == QuadraticNumber(3, 3, 2)

    def test_pow_matches_repeated_multiplication(self):
        q = QuadraticNumber(2, -1, 11)
        by_mul = QuadraticNumber(1)
        for _ in range(6):
            by_mul = by_mul * q
        assert q**6 == by_mul
        assert q**0 == QuadraticNumber(1)
        with pytest.raises(ValueError):
            q ** (-1)

    def test_zero_division(self):
        with pytest.raises(ZeroDivisionError):
            QuadraticNumber(1) / QuadraticNumber(0)

    def test_bool_and_str(self):
        assert not QuadraticNumber(0)
        assert QuadraticNumber(0, 1, 2)
        assert str(QuadraticNumber(Fraction(1, 2))) == "1/2"
        assert "sqrt(5)" in str(QuadraticNumber(1, 1, 5))


class TestEmbedQuadratic:
    def test_against_mpmath(self, ctx40):
        q = QuadraticNumber(Fraction(1, 3), Fraction(-2, 7), 13)
        with ctx40.working():
            expected = mpf(1) / 3 - mpf(2) / 7 * mpmath.sqrt(13)
            assert abs(embed_quadratic(q, ctx40) - expected) < ctx40.tol

    def test_catastrophic_cancellation(self, ctx40):
        # (1121 - 338*sqrt(11))^4: the components are ~1e12 but the value is
        # tiny, so a naive embedding at working precision loses ~19 digits.
        q = QuadraticNumber(1121, -338, 11) ** 4
        with mpmath.workdps(120):
            expected = (1121 - 338 * mpmath.sqrt(11)) ** 4
        got = embed_quadratic(q, ctx40)
        assert abs(got - expected) / abs(expected) < mpf(10) ** -50

    def test_exact_rational_fast_path(self, ctx40):
        with ctx40.working():
            assert embed_quadratic(QuadraticNumber(Fraction(22, 7)), ctx40) \
                == mpf(22) / 7

    def test_quad_expr(self, ctx40):
        e = QuadExpr(QuadraticNumber(3, 1, 7), QuadraticNumber(0, 2, 2))
        with ctx40.working():
            expected = (3 + mpmath.sqrt(7)) / (2 * mpmath.sqrt(2))
            assert abs(e.embed(ctx40) - expected) < ctx40.tol

    def test_quad_expr_zero_denominator(self, ctx40):
        with pytest.raises(ZeroDivisionError):
            QuadExpr(QuadraticNumber(1), QuadraticNumber(0)).embed(ctx40)


class TestZetaAndTrigamma:
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_zeta_against_mpmath(self, n, ctx40):
        with ctx40.working():
            assert abs(zeta_int(n, ctx40) - mpmath.zeta(n)) < ctx40.tol

    def test_zeta_rejects_other_orders(self, ctx40):
        with pytest.raises(DomainError):
            zeta_int(5, ctx40)

    @pytest.mark.parametrize("x", [Fraction(1), Fraction(1, 2),
                                   Fraction(1, 3), Fraction(5, 7),
                                   Fraction(11, 12)])
    def test_trigamma_against_mpmath(self, x, ctx40):
        with ctx40.working():
            expected = mpmath.polygamma(1, mpf(x.numerator) / x.denominator)
            assert abs(trigamma(x, ctx40) - expected) < 10 * ctx40.tol

    def test_trigamma_domain(self, ctx40):
        with pytest.raises(DomainError):
            trigamma(Fraction(3, 2), ctx40)
        with pytest.raises(DomainError):
            trigamma(Fraction(0), ctx40)
