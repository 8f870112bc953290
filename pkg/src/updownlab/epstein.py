"""Real-analytic Epstein/Eisenstein zeta values at s = 2.

The SL(2, Z) value is computed from the exponentially convergent Fourier
expansion (elementary K_{3/2} Bessel factors); truncated lattice sums over
rings serve as independent low-precision oracles, including the level-N
coset sums used to check the two-line lattice lemma.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import mpmath
import numpy as np
from mpmath import mp, mpf

from .numerics import DomainError, PrecisionContext, zeta_int
from .modular import _as_mpc, _sigma3_table


@dataclass(frozen=True)
class EpsteinQuery:
    z: object
    level: int = 1

    def __post_init__(self) -> None:
        if self.level not in (1, 2, 3, 4):
            raise DomainError(f"level must be in {{1, 2, 3, 4}}, got {self.level}")


class LatticeSum(NamedTuple):
    """Truncated lattice sum together with a certified tail bound."""

    value: mpf
    tail: mpf


def epstein_sl2(z, ctx: PrecisionContext) -> mpf:
    """E(z, 2) summed over Im of the full modular orbit, via the Fourier
    expansion

        E(z, 2) = y^2 + 45 zeta(3) / (pi^3 y)
                + (180/pi^2) sum_n sigma_3(n)/n^2 (1 + 1/(2 pi n y))
                  e^{-2 pi n y} cos(2 pi n x).
    """
    z = _as_mpc(z)
    with ctx.working():
        x, y = z.real, z.imag
        n_max = int((ctx.dps + 10) * math.log(10) / (2 * math.pi * float(y))) + 2
        sig = _sigma3_table(n_max)
        q_abs = mpmath.exp(-2 * mp.pi * y)
        qn = mpf(1)
        total = mpf(0)
        for n in range(1, n_max + 1):
            qn *= q_abs
            total += (
                mpf(sig[n]) / n**2 * (1 + 1 / (2 * mp.pi * n * y))
                * qn * mpmath.cos(2 * mp.pi * n * x)
            )
        return y**2 + 45 * zeta_int(3, ctx) / (mp.pi**3 * y) + 180 / mp.pi**2 * total


def _lambda_min(x: float, y: float, n_scale: int = 1) -> float:
    """Smallest eigenvalue of the form |(n_scale c) z + d|^2 in (c, d)."""
    a = n_scale * n_scale * (x * x + y * y)
    tr = a + 1.0
    det = n_scale * n_scale * y * y
    return (tr - math.sqrt(tr * tr - 4 * det)) / 2


def epstein_sl2_bruteforce(z, radius: int, ctx: PrecisionContext) -> LatticeSum:
    """Full-lattice oracle: sum y^2/|m z + n|^4 over 0 < max(|m|,|n|) <= radius,
    divided by 2 zeta(4). Rings are accumulated in ascending order."""
    if radius < 10:
        raise DomainError(f"radius must be >= 10, got {radius}")
    z = _as_mpc(z)
    with ctx.working():
        x, y = float(z.real), float(z.imag)
        total = 0.0
        for ring in range(1, radius + 1):
            mm, nn = _ring_points(ring)
            total += float(
                np.sum(y * y / ((mm * x + nn) ** 2 + (mm * y) ** 2) ** 2)
            )
        lam = _lambda_min(x, y)
        tail = 4.0 * y * y / (lam * lam * radius * radius)
        two_zeta4 = 2 * zeta_int(4, ctx)
        return LatticeSum(mpf(total) / two_zeta4, mpf(tail) / two_zeta4)


def _ring_points(r: int):
    """Integer pairs with max(|m|, |n|) == r, as numpy arrays."""
    side = np.arange(-r, r + 1)
    mm = np.concatenate([np.full(2 * r + 1, r), np.full(2 * r + 1, -r), side[1:-1], side[1:-1]])
    nn = np.concatenate([side, side, np.full(2 * r - 1, r), np.full(2 * r - 1, -r)])
    return mm.astype(np.float64), nn.astype(np.float64)


def epstein_gamma0(z, N: int, ctx: PrecisionContext, radius: int = 600) -> LatticeSum:
    """Level-N coset sum: y^2 / |c z + d|^4 over coprime (c, d) with N | c,
    taken up to sign. Moderate precision only (used for lemma checks)."""
    if N not in (2, 3, 4):
        raise DomainError(f"level must be in {{2, 3, 4}}, got {N}")
    z = _as_mpc(z)
    with ctx.working():
        x, y = float(z.real), float(z.imag)
        # The c = 0 cosets reduce to (0, 1) and contribute y^2, added below.
        total = 0.0
        for k in range(1, radius + 1):
            c = N * k
            d = np.arange(-radius, radius + 1)
            mask = np.gcd(np.full_like(d, c), np.abs(d)) == 1
            dd = d[mask].astype(np.float64)
            total += float(np.sum(y * y / ((c * x + dd) ** 2 + (c * y) ** 2) ** 2))
        value = mpf(y) ** 2 + mpf(total)
        lam = _lambda_min(x, y, n_scale=N)
        tail = mpf(4.0 * y * y / (lam * lam * radius * radius))
        return LatticeSum(value, tail)
