"""Kronecker symbols, fundamental-discriminant tests, and L_d(2) values.

L_d(2) = sum_{k>=1} (d/k) / k^2 is evaluated exactly over residue classes:
L_d(2) = |d|^-2 sum_{a=1}^{|d|} (d/a) * trigamma(a/|d|), which presumes the
symbol is periodic mod |d| (true for every discriminant in the corpus).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath import mpf

from .numerics import DomainError, PrecisionContext, trigamma, zeta_int, _is_squarefree


@dataclass(frozen=True)
class Discriminant:
    """d = 1 (trivial character) or a nonzero integer with d = 0, 1 mod 4."""

    d: int

    def __post_init__(self) -> None:
        if self.d == 0 or (self.d != 1 and self.d % 4 not in (0, 1)):
            raise DomainError(f"invalid discriminant {self.d}")


def kronecker_symbol(d: int, k: int) -> int:
    """Kronecker symbol (d/k) for k >= 0."""
    if k < 0:
        raise DomainError("kronecker_symbol expects k >= 0")
    if k == 0:
        return 1 if d in (1, -1) else 0
    if d == 0:
        return 1 if k == 1 else 0
    result = 1
    # 2-part of k: (d/2) is 0 for even d, +1 for d = +-1 mod 8, -1 otherwise.
    if k % 2 == 0:
        if d % 2 == 0:
            return 0
        sym2 = 1 if d % 8 in (1, 7) else -1
        while k % 2 == 0:
            k //= 2
            result *= sym2
    # Jacobi symbol (d mod k / k) for odd k > 0, by quadratic reciprocity.
    a = d % k
    while a:
        while a % 2 == 0:
            a //= 2
            if k % 8 in (3, 5):
                result = -result
        a, k = k, a
        if a % 4 == 3 and k % 4 == 3:
            result = -result
        a %= k
    return result if k == 1 else 0


def is_fundamental_discriminant(D: int) -> bool:
    if D == 0:
        return False
    if D % 4 == 1 and D != 1:
        return _is_squarefree(D)
    if D % 16 in (8, 12):
        return _is_squarefree(D // 4)
    return False


def dirichlet_l2(d, ctx: PrecisionContext) -> mpf:
    """L_d(2) to ctx.digits; d may be a Discriminant or an integer."""
    if isinstance(d, Discriminant):
        d = d.d
    else:
        d = Discriminant(d).d
    with ctx.working():
        if d == 1:
            return zeta_int(2, ctx)
        q = abs(d)
        total = mpf(0)
        for a in range(1, q + 1):
            chi = kronecker_symbol(d, a)
            if chi:
                total += chi * trigamma(Fraction(a, q), ctx)
        return total / q**2


def dirichlet_l2_direct(d: int, terms: int = 100_000) -> float:
    """Truncated direct series sum_{k<=terms} (d/k)/k^2 (float oracle)."""
    q = abs(d) if d != 1 else 1
    pattern = [kronecker_symbol(d, r) for r in range(q)]
    total = 0.0
    for k in range(1, terms + 1):
        chi = pattern[k % q]
        if chi:
            total += chi / (k * k)
    return total
