"""Arbitrary-precision arithmetic facade and exact quadratic-field numbers.

Everything numeric downstream goes through a PrecisionContext: values are
computed at ``digits + guard`` decimal places and reported at ``digits``.
Exact algebraic coefficients live in QuadraticNumber (a + b*sqrt(D) over Q).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import mpmath
from mpmath import mp, mpf

RationalLike = Union[int, Fraction]


class DomainError(ValueError):
    """An argument lies outside the domain an operation supports."""


class MixedRadicandError(ValueError):
    """Arithmetic between quadratic numbers with different radicands."""


@dataclass(frozen=True)
class PrecisionContext:
    """Requested decimal digits plus guard digits carried internally."""

    digits: int = 40
    guard: int = 15
    max_terms: int = 10_000_000

    def __post_init__(self) -> None:
        if self.digits < 10:
            raise ValueError(f"digits must be >= 10, got {self.digits}")
        if self.guard < 10:
            raise ValueError(f"guard must be >= 10, got {self.guard}")
        if self.max_terms < 1000:
            raise ValueError(f"max_terms must be >= 1000, got {self.max_terms}")

    @property
    def dps(self) -> int:
        return self.digits + self.guard

    def working(self):
        """Context manager setting the working decimal precision."""
        return mpmath.workdps(self.dps)

    @property
    def eps(self) -> mpf:
        """Target absolute truncation error at working precision."""
        with self.working():
            return mpf(10) ** (-self.dps)

    @property
    def tol(self) -> mpf:
        """10^-digits, the reporting tolerance."""
        with self.working():
            return mpf(10) ** (-self.digits)

    def bumped(self, extra: int = 10) -> "PrecisionContext":
        return PrecisionContext(self.digits + extra, self.guard, self.max_terms)


def _is_squarefree(n: int) -> bool:
    n = abs(n)
    if n == 0:
        return False
    if n % 4 == 0:
        return False
    p = 3
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        while n % p == 0:
            n //= p
        p += 2
    return True


def _as_fraction(x: RationalLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected int or Fraction, got {type(x).__name__}")


@dataclass(frozen=True)
class QuadraticNumber:
    """Exact a + b*sqrt(D) with rational a, b and squarefree D >= 1.

    b == 0 is normalized to D == 1, so plain rationals mix with any radicand.
    Arithmetic between two genuinely irrational values requires equal D.
    """

    a: Fraction
    b: Fraction
    D: int

    def __init__(self, a: RationalLike = 0, b: RationalLike = 0, D: int = 1):
        a = _as_fraction(a)
        b = _as_fraction(b)
        if D < 1:
            raise ValueError(f"radicand must be >= 1, got {D}")
        if b == 0:
            D = 1
        elif D == 1:
            a, b = a + b, Fraction(0)
        elif not _is_squarefree(D):
            raise ValueError(f"radicand must be squarefree, got {D}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "D", D)

    # -- helpers -----------------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def _coerce(self, other) -> "QuadraticNumber":
        if isinstance(other, QuadraticNumber):
            return other
        if isinstance(other, (int, Fraction)):
            return QuadraticNumber(other)
        return NotImplemented

    def _common_d(self, other: "QuadraticNumber") -> int:
        if self.is_rational:
            return other.D
        if other.is_rational:
            return self.D
        if self.D != other.D:
            raise MixedRadicandError(
                f"cannot combine sqrt({self.D}) with sqrt({other.D})"
            )
        return self.D

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        D = self._common_d(other)
        return QuadraticNumber(self.a + other.a, self.b + other.b, D)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.a, -self.b, self.D)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        D = self._common_d(other)
        return QuadraticNumber(
            self.a * other.a + self.b * other.b * D,
            self.a * other.b + self.b * other.a,
            D,
        )

    __rmul__ = __mul__

    def conjugate(self) -> "QuadraticNumber":
        return QuadraticNumber(self.a, -self.b, self.D)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.D

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        n = other.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero quadratic number")
        return self * other.conjugate() * QuadraticNumber(Fraction(1, 1) / n)

    def __rtruediv__(self, other):
        return QuadraticNumber(other) / self

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers are supported")
        result = QuadraticNumber(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __bool__(self) -> bool:
        return self.a != 0 or self.b != 0

    def __str__(self) -> str:
        if self.is_rational:
            return str(self.a)
        return f"{self.a} + {self.b}*sqrt({self.D})"


def embed_quadratic(q: QuadraticNumber, ctx: PrecisionContext) -> mpf:
    """Evaluate a + b*sqrt(D) with the positive square root.

    Values such as (1121 - 338*sqrt(11))^4 have huge exactly-known a and b
    whose embeddings nearly cancel, so the working precision is raised by the
    number of digits lost to cancellation before the final rounding.
    """
    with ctx.working():
        if not q.b:
            return mpf(q.a.numerator) / q.a.denominator

        def at_current_dps():
            a = mpf(q.a.numerator) / q.a.denominator
            b = (mpf(q.b.numerator) / q.b.denominator) * mpmath.sqrt(q.D)
            return a + b, max(abs(a), abs(b))

        value, scale = at_current_dps()
        if not value or scale / abs(value) > 10:
            lost = ctx.dps if not value \
                else int(mpmath.log10(scale / abs(value))) + 5
            with mpmath.workdps(ctx.dps + lost):
                value, _ = at_current_dps()
        return +value


@dataclass(frozen=True)
class QuadExpr:
    """Quotient of two quadratic numbers, possibly over different radicands.

    Covers table entries such as 3*(17*sqrt(7)+35)/(8*sqrt(2)) that do not fit
    a single a + b*sqrt(D).
    """

    num: QuadraticNumber
    den: QuadraticNumber = QuadraticNumber(1)

    def embed(self, ctx: PrecisionContext) -> mpf:
        with ctx.working():
            d = embed_quadratic(self.den, ctx)
            if d == 0:
                raise ZeroDivisionError("zero denominator in QuadExpr")
            return embed_quadratic(self.num, ctx) / d

    def __str__(self) -> str:
        if self.den == QuadraticNumber(1):
            return str(self.num)
        return f"({self.num}) / ({self.den})"


# -- special constants -----------------------------------------------------

def zeta_int(n: int, ctx: PrecisionContext) -> mpf:
    """zeta(2), zeta(3), or zeta(4) to ctx.digits."""
    with ctx.working():
        if n == 2:
            return mp.pi**2 / 6
        if n == 4:
            return mp.pi**4 / 90
        if n == 3:
            return _zeta3(ctx)
        raise DomainError(f"zeta_int supports n in {{2, 3, 4}}, got {n}")


def _zeta3(ctx: PrecisionContext) -> mpf:
    # Central-binomial acceleration: zeta(3) = (5/2) sum (-1)^(k-1) / (k^3 C(2k,k)).
    # Terms shrink by ~1/4 each, so 2 bits per term.
    with ctx.working():
        eps = ctx.eps
        total = mpf(0)
        binom = 2  # C(2k, k) at k = 1
        k = 1
        sign = 1
        while True:
            term = mpf(sign) / (k**3 * binom)
            total += term
            if abs(term) < eps / 4:
                break
            binom = binom * 2 * (2 * k + 1) // (k + 1)
            k += 1
            sign = -sign
            if k > ctx.max_terms:
                raise RuntimeError("zeta(3) series exceeded max_terms")
        return mpf(5) / 2 * total


# Bernoulli numbers B_2 .. B_18 (B_18 only enters the remainder bound).
_BERNOULLI = [
    Fraction(1, 6),
    Fraction(-1, 30),
    Fraction(1, 42),
    Fraction(-1, 30),
    Fraction(5, 66),
    Fraction(-691, 2730),
    Fraction(7, 6),
    Fraction(-3617, 510),
]
_B18 = Fraction(43867, 798)


def trigamma(x, ctx: PrecisionContext) -> mpf:
    """sum_{n>=0} 1/(n+x)^2 for 0 < x <= 1, via Euler-Maclaurin.

    Eight correction terms; the cutoff is chosen so the first dropped term,
    |B_18| / y^19, is below 10^-(digits+guard).
    """
    with ctx.working():
        xv = mpf(x.numerator) / x.denominator if isinstance(x, Fraction) else mpf(x)
        if not (0 < xv <= 1):
            raise DomainError(f"trigamma requires 0 < x <= 1, got {xv}")
        # |B_18| / M^19 < 10^-dps  =>  M > (|B_18| * 10^dps)^(1/19)
        cutoff = int(math.ceil(10 ** ((math.log10(float(_B18)) + ctx.dps) / 19))) + 1
        total = mpf(0)
        for n in range(cutoff):
            total += 1 / (xv + n) ** 2
        y = xv + cutoff
        tail = 1 / y + 1 / (2 * y**2)
        ypow = y**3
        for b in _BERNOULLI:
            tail += mpf(b.numerator) / b.denominator / ypow
            ypow *= y**2
        return total + tail
