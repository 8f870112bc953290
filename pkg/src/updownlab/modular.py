"""q-series modular machinery: eta, alpha_N, Klein j, E4, and the weighted
Eichler integral of 1 - E4, plus Legendre-type special functions and CM-point
utilities.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp, mpc, mpf

from .numerics import DomainError, PrecisionContext

_LEVELS = (2, 3, 4)
_NU_BY_LEVEL = {2: Fraction(-1, 4), 3: Fraction(-1, 3), 4: Fraction(-1, 2)}


class PoleError(ArithmeticError):
    """Evaluation at a pole of the requested function."""


@dataclass(frozen=True)
class HalfPlanePoint:
    re: object
    im: object

    def __post_init__(self) -> None:
        if not mpf(self.im) > 0:
            raise DomainError("point must lie in the upper half-plane")

    def to_mpc(self) -> mpc:
        return mpc(self.re, self.im)


def _as_mpc(z) -> mpc:
    if isinstance(z, HalfPlanePoint):
        z = z.to_mpc()
    elif isinstance(z, CMPoint):
        raise TypeError("embed the CMPoint with .to_point(ctx) first")
    z = mpc(z)
    if not z.imag > 0:
        raise DomainError(f"point must lie in the upper half-plane, got {z}")
    return z


# -- CM points -------------------------------------------------------------

_RAT = r"(\d+(?:/\d+)?)"
_CM_RE = re.compile(
    rf"^\s*([+-]?)\s*{_RAT}\s*([+-])\s*{_RAT}\s*\*\s*sqrt\(\s*(\d+)\s*\)\s*\*\s*i\s*$"
)


@dataclass(frozen=True)
class CMPoint:
    """Quadratic irrational in the upper half-plane, root of A z^2 + B z + C."""

    A: int
    B: int
    C: int

    def __post_init__(self) -> None:
        if self.A <= 0:
            raise DomainError("leading coefficient must be positive")
        if self.B * self.B - 4 * self.A * self.C >= 0:
            raise DomainError("polynomial must have complex roots")
        if math.gcd(math.gcd(self.A, self.B), self.C) != 1:
            raise DomainError("coefficients must be coprime")

    @classmethod
    def from_rational(cls, x: Fraction, y_sq: Fraction) -> "CMPoint":
        """Point x + sqrt(y_sq) i with rational x and rational y_sq > 0."""
        if y_sq <= 0:
            raise DomainError("imaginary part must be positive")
        # (z - x)^2 = -y_sq  =>  z^2 - 2x z + x^2 + y_sq = 0, cleared and primitive.
        b = -2 * x
        c = x * x + y_sq
        den = math.lcm(b.denominator, c.denominator)
        a_i, b_i, c_i = den, int(b * den), int(c * den)
        g = math.gcd(math.gcd(a_i, b_i), c_i)
        return cls(a_i // g, b_i // g, c_i // g)

    @classmethod
    def from_string(cls, text: str) -> "CMPoint":
        """Parse "SIGN? RAT (+|-) RAT*sqrt(INT)*i" (also bare "i", "RAT*i",
        "RAT*sqrt(INT)*i")."""
        s = text.strip()
        m = _CM_RE.match(s)
        if m:
            sign, re_part, im_sign, im_part, rad = m.groups()
            x = Fraction(re_part)
            if sign == "-":
                x = -x
            r = Fraction(im_part)
            if im_sign == "-":
                raise DomainError(f"imaginary part must be positive in {text!r}")
            return cls.from_rational(x, r * r * int(rad))
        m = re.match(rf"^\s*(?:{_RAT}\s*\*\s*)?(?:sqrt\(\s*(\d+)\s*\)\s*\*\s*)?i\s*$", s)
        if m:
            r = Fraction(m.group(1)) if m.group(1) else Fraction(1)
            rad = int(m.group(2)) if m.group(2) else 1
            return cls.from_rational(Fraction(0), r * r * rad)
        raise DomainError(f"cannot parse CM point {text!r}")

    @property
    def disc(self) -> int:
        return self.B * self.B - 4 * self.A * self.C

    def to_point(self, ctx: PrecisionContext) -> mpc:
        with ctx.working():
            return mpc(
                mpf(-self.B) / (2 * self.A),
                mpmath.sqrt(mpf(-self.disc)) / (2 * self.A),
            )


def discriminant(p: CMPoint) -> int:
    return p.disc


# -- eta, alpha_N, j, E4 ---------------------------------------------------

def _qseries_cutoff(y: mpf, ctx: PrecisionContext, log_margin: float = 10.0) -> int:
    """Smallest n with |q|^n below the working epsilon (with margin)."""
    return int((ctx.dps + log_margin) * math.log(10) / (2 * math.pi * float(y))) + 2


def dedekind_eta(z, ctx: PrecisionContext) -> mpc:
    """eta(z) by the pentagonal-number expansion of the product."""
    z = _as_mpc(z)
    with ctx.working():
        q = mpmath.exp(2j * mp.pi * z)
        n_max = _qseries_cutoff(z.imag, ctx)
        total = mpc(1)
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > n_max:
                break
            sign = -1 if k % 2 else 1
            total += sign * q**g1
            g2 = k * (3 * k + 1) // 2
            if g2 <= n_max:
                total += sign * q**g2
            k += 1
        return mpmath.exp(1j * mp.pi * z / 12) * total


def alpha_n(z, N: int, ctx: PrecisionContext) -> mpc:
    """Level-N modular invariant built from the eta quotient eta(z)/eta(Nz)."""
    if N not in _LEVELS:
        raise DomainError(f"level must be in {_LEVELS}, got {N}")
    z = _as_mpc(z)
    with ctx.working():
        quotient = dedekind_eta(z, ctx) / dedekind_eta(N * z, ctx)
        exponent = 24 // (N - 1)
        scale = mpf(N) ** Fraction(6, N - 1)
        return 1 / (1 + quotient**exponent / scale)


def j_invariant(z, ctx: PrecisionContext) -> mpc:
    """Klein's j, normalized so j(i) = 1728, via alpha_4(z/2)."""
    z = _as_mpc(z)
    with ctx.working():
        a = alpha_n(z / 2, 4, ctx)
        denom = a**2 * (1 - a) ** 2
        if abs(denom) < ctx.eps:
            raise PoleError(f"j-invariant pole: alpha_4(z/2) in {{0, 1}} at z = {z}")
        return 2**8 * (1 - a + a**2) ** 3 / denom


def _sigma3_table(n_max: int) -> list:
    sig = [0] * (n_max + 1)
    for d in range(1, n_max + 1):
        cube = d * d * d
        for m in range(d, n_max + 1, d):
            sig[m] += cube
    return sig


def eisenstein_e4(z, ctx: PrecisionContext) -> mpc:
    """E4(z) = 1 + 240 sum sigma_3(n) q^n."""
    z = _as_mpc(z)
    with ctx.working():
        q = mpmath.exp(2j * mp.pi * z)
        n_max = _qseries_cutoff(z.imag, ctx, log_margin=20.0)
        sig = _sigma3_table(n_max)
        qn = mpc(1)
        total = mpc(0)
        for n in range(1, n_max + 1):
            qn *= q
            total += sig[n] * qn
        return 1 + 240 * total


def eichler_e4_tilde(z, ctx: PrecisionContext) -> mpc:
    """Integral of [1 - E4(w)] (z - w)(conj(z) - w) dw from z to i*infinity.

    Along the vertical ray each q-series mode integrates in closed form:
    int e^{2 pi i n w} (z-w)(zbar-w) dw = -i q^n [2y/(2 pi n)^2 + 2/(2 pi n)^3],
    so the whole integral is 240i sum sigma_3(n) q^n [y/(2 pi^2 n^2) + 1/(4 pi^3 n^3)].
    """
    z = _as_mpc(z)
    with ctx.working():
        y = z.imag
        q = mpmath.exp(2j * mp.pi * z)
        n_max = _qseries_cutoff(y, ctx, log_margin=20.0)
        sig = _sigma3_table(n_max)
        qn = mpc(1)
        total = mpc(0)
        for n in range(1, n_max + 1):
            qn *= q
            total += sig[n] * qn * (y / (2 * mp.pi**2 * n**2) + 1 / (4 * mp.pi**3 * n**3))
        return 240j * total


def re_eichler_closed_form(z, ctx: PrecisionContext) -> mpf:
    """Closed form of Re of the Eichler integral when 2 Re z or 2 Re(1/z) is
    an integer (the second case from the reflection functional equation)."""
    z = _as_mpc(z)
    with ctx.working():
        slack = mpf(10) ** (-(ctx.digits // 2))
        x, y = z.real, z.imag
        two_x = 2 * x
        if abs(two_x - mpmath.nint(two_x)) < slack:
            return mpf(0)
        w = 2 * (1 / z).real
        if abs(w - mpmath.nint(w)) < slack:
            r2 = x * x + y * y
            return -(x / 3) * ((r2 + 2 * y * y) / r2**2 + r2 + 2 * y * y - 5)
        raise DomainError(
            f"neither 2*Re(z) nor 2*Re(1/z) is an integer at z = {z}"
        )


def reflection_residual(z, ctx: PrecisionContext) -> mpf:
    """|LHS - RHS| of the reflection identity relating Re of the Eichler
    integral at z and at -1/z; small residuals certify the q-series path."""
    z = _as_mpc(z)
    with ctx.working():
        x, y = z.real, z.imag
        r2 = x * x + y * y
        lhs = (
            r2 / y**2 * eichler_e4_tilde(-1 / z, ctx).real
            - eichler_e4_tilde(z, ctx).real / y**2
        )
        rhs = x / (3 * y**2) * ((r2 + 2 * y * y) / r2**2 + r2 + 2 * y * y - 5)
        return abs(lhs - rhs)


# -- Legendre / Legendre-Ramanujan functions -------------------------------

_NU_SET = {Fraction(-1, 4), Fraction(-1, 3), Fraction(-1, 2)}


def _check_nu(nu) -> Fraction:
    nu = Fraction(nu)
    if nu not in _NU_SET:
        raise DomainError(f"degree must be -1/4, -1/3, or -1/2, got {nu}")
    return nu


def _on_cut(t: mpc) -> bool:
    return t.imag == 0 and t.real >= 1


def legendre_p(nu, t, ctx: PrecisionContext) -> mpc:
    """P_nu(1 - 2t) for t off the cut [1, oo).

    Power series sum ((-nu)_k (nu+1)_k / (k!)^2) t^k for |t| < 1/2, analytic
    continuation of the same hypergeometric function otherwise.
    """
    nu = _check_nu(nu)
    with ctx.working():
        t = mpc(t)
        if _on_cut(t):
            raise DomainError(f"argument t = {t} lies on the cut [1, oo)")
        if abs(t) < 0.5:
            coeff = mpc(1)
            total = mpc(1)
            k = 0
            eps = ctx.eps
            while True:
                coeff *= t * (-nu + k) * (nu + 1 + k) / (k + 1) ** 2
                total += coeff
                k += 1
                if abs(coeff) < eps * abs(total) / 4 and k > 4:
                    return total
        return mpmath.hyp2f1(-_frac_mpf(nu), _frac_mpf(nu) + 1, 1, t)


def _frac_mpf(x: Fraction) -> mpf:
    return mpf(x.numerator) / x.denominator


def legendre_p_dt(nu, t, ctx: PrecisionContext) -> mpc:
    """d/dt of the hypergeometric series behind legendre_p."""
    nu = _check_nu(nu)
    with ctx.working():
        t = mpc(t)
        if _on_cut(t):
            raise DomainError(f"argument t = {t} lies on the cut [1, oo)")
        nv = _frac_mpf(nu)
        if abs(t) < 0.5:
            coeff = -nv * (nv + 1)
            total = mpc(coeff)
            cur = mpc(coeff)
            k = 1
            eps = ctx.eps
            while True:
                cur *= t * (-nv + k) * (nv + 1 + k) / (k * (k + 1))
                total += cur
                k += 1
                if abs(cur) < eps * (abs(total) + 1) / 4 and k > 4:
                    return total
        return -nv * (nv + 1) * mpmath.hyp2f1(1 - nv, nv + 2, 2, t)


def legendre_p_quadrature(nu, t, ctx: PrecisionContext) -> mpc:
    """Independent oracle: direct quadrature of the defining integral
    -sin(nu pi)/pi int_0^1 [X(1-tX)/(1-X)]^nu dX/(1-X)."""
    nu = _check_nu(nu)
    with ctx.working():
        t = mpc(t)
        if _on_cut(t):
            raise DomainError(f"argument t = {t} lies on the cut [1, oo)")
        nv = _frac_mpf(nu)

        def integrand(X):
            return (X * (1 - t * X) / (1 - X)) ** nv / (1 - X)

        points = [mpf(0), mpf(1)]
        if abs(t) > 1:
            x0 = (1 / t).real
            if 0 < x0 < 1:
                points = [mpf(0), x0, mpf(1)]
        val = mpmath.quad(integrand, points)
        return -mpmath.sinpi(nv) / mp.pi * val


def _r_direct(nu: Fraction, xi: mpc, ctx: PrecisionContext) -> mpc:
    with ctx.working():
        nv = _frac_mpf(nu)
        t_plus = (1 - xi) / 2   # argument of P_nu(xi)
        t_minus = (1 + xi) / 2  # argument of P_nu(-xi)
        p_p = legendre_p(nu, t_plus, ctx)
        p_m = legendre_p(nu, t_minus, ctx)
        # P_nu(x) = F((1-x)/2) with F the hypergeometric sum, so the xi
        # derivative picks up -(1/2) F' at xi and +(1/2) F' at -xi.
        d_p = -legendre_p_dt(nu, t_plus, ctx) / 2
        d_m = legendre_p_dt(nu, t_minus, ctx) / 2
        one_m = 1 - xi**2
        logderiv = one_m * d_p / p_p + one_m * d_m / p_m
        im1 = (1j * p_m / p_p).imag
        im2 = (1j * p_p / p_m).imag
        correction = (
            mpmath.sinpi(nv)
            / mp.pi
            * (1 / (p_p**2 * im1) - 1 / (p_m**2 * im2))
        )
        return logderiv - correction


def legendre_ramanujan_r(nu, xi, ctx: PrecisionContext) -> mpc:
    """Legendre-Ramanujan combination R_nu(xi).

    Real xi with |xi| >= 1 sits on a branch line; the value is obtained by
    Richardson extrapolation of evaluations at xi (1 + i delta), with a
    two-sided agreement check.
    """
    nu = _check_nu(nu)
    with ctx.working():
        xi = mpc(xi)
        scale = 1 + abs(xi)
        if abs(xi.imag) > mpf(10) ** (-(ctx.digits // 2)) * scale:
            return _r_direct(nu, xi, ctx)
        x = xi.real
        if abs(x) < 1:
            return _r_direct(nu, mpc(x), ctx)
        delta = mpf(10) ** (-(ctx.digits // 3))

        def extrapolate(sign):
            # Quadratic Richardson at delta, delta/2, delta/4: error O(delta^3).
            r1 = _r_direct(nu, x * (1 + sign * 1j * delta), ctx)
            r2 = _r_direct(nu, x * (1 + sign * 1j * delta / 2), ctx)
            r4 = _r_direct(nu, x * (1 + sign * 1j * delta / 4), ctx)
            return (8 * r4 - 6 * r2 + r1) / 3

        above = extrapolate(+1)
        below = extrapolate(-1)
        tol = mpf(10) ** (-(ctx.digits // 2)) * (1 + abs(above))
        if abs(above - below) > tol:
            raise ArithmeticError(
                f"one-sided limits of R_nu disagree at xi = {xi}: "
                f"{above} vs {below}"
            )
        return (above + below) / 2


def satisfies_region(z, N: int, ctx: PrecisionContext) -> bool:
    """Admissibility constraints for the series lemma, with boundary slack."""
    if N not in _LEVELS:
        raise DomainError(f"level must be in {_LEVELS}, got {N}")
    z = _as_mpc(z)
    with ctx.working():
        slack = mpf(10) ** (-(ctx.digits // 2))
        a = alpha_n(z, N, ctx)
        if abs(4 * a * (1 - a)) < 1 - slack:
            return False
        if abs(2 * a - 1) <= slack:
            return False
        if abs(z.real) > mpf(1) / 2 + slack:
            return False
        r = mpf(1) / N
        if abs(z + r) < r - slack or abs(z - r) < r - slack:
            return False
        return True
