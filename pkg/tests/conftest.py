"""Shared fixtures: precision contexts, the shipped corpus, and random
half-plane points drawn from a fixed seed so runs are reproducible."""

import random

import pytest
from mpmath import mpc

from updownlab import PrecisionContext, load_corpus, satisfies_region


@pytest.fixture(scope="session")
def ctx30():
    return PrecisionContext(digits=30)


@pytest.fixture(scope="session")
def ctx40():
    return PrecisionContext(digits=40)


@pytest.fixture(scope="session")
def corpus():
    return load_corpus()


def random_points(n, seed, x_range=(-0.45, 0.45), y_range=(0.7, 1.4)):
    """Deterministic sample of generic upper half-plane points."""
    rng = random.Random(seed)
    return [
        mpc(rng.uniform(*x_range), rng.uniform(*y_range)) for _ in range(n)
    ]


# Sampling windows in which admissible points are reasonably dense per level.
_ADMISSIBLE_Y = {2: (0.7, 1.3), 3: (0.7, 1.3), 4: (0.25, 0.7)}


def random_admissible(n, level, ctx, seed, max_ratio=None, tries=3000):
    """Deterministic admissible CM-free points for the series/lattice lemmas.

    ``max_ratio`` additionally bounds |m|/scale so the series converge fast
    enough for tests.
    """
    from updownlab.series import _FAMILY_BY_LEVEL, series_constants_from_cm

    rng = random.Random(seed)
    lo, hi = _ADMISSIBLE_Y[level]
    out = []
    for _ in range(tries):
        z = mpc(rng.uniform(-0.45, 0.45), rng.uniform(lo, hi))
        if not satisfies_region(z, level, ctx):
            continue
        if max_ratio is not None:
            _, _, m = series_constants_from_cm(z, level, ctx)
            if abs(m) / _FAMILY_BY_LEVEL[level].scale > max_ratio:
                continue
        out.append(z)
        if len(out) == n:
            return out
    raise RuntimeError(
        f"only found {len(out)}/{n} admissible points for level {level}"
    )
