"""
Seeded random skew products for experiment corpora.

Every sampler is a pure function of its seed. Corpora draw one child seed per
sample from :class:`numpy.random.SeedSequence`, so a sample does not depend on
the order in which the others are generated.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

import numpy as np

from padicskew.dynamics.base_maps import odometer, swap
from padicskew.dynamics.skew import SkewProduct
from padicskew.errors import DomainError
from padicskew.models.exchange import IntervalExchange
from padicskew.models.padic import PAdicPermutation

Seed = Union[int, np.random.SeedSequence, np.random.Generator]


def spawn_seeds(seed: int, count: int) -> list[np.random.SeedSequence]:
    """Independent child seeds for ``count`` samples."""
    return np.random.SeedSequence(seed).spawn(count)


def sample_base(p: int, rank: int, seed: Seed) -> PAdicPermutation:
    """A uniformly random rank-``rank`` permutation."""
    rng = np.random.default_rng(seed)
    return PAdicPermutation.from_array(p, rank, rng.permutation(p**rank))


def sample_skew(
    base: PAdicPermutation,
    fiber_rank: int,
    n_labels: int,
    seed: Seed,
    degenerate: bool = False,
) -> SkewProduct:
    """Random fiber permutations on a random assignment over ``base``.

    Args:
        base: The base map.
        fiber_rank: Rank of the fiber permutations.
        n_labels: Number of fiber maps to draw, at least 1.
        seed: Seed; equal seeds give equal skew products.
        degenerate: Return ``base × 1_Y`` regardless of the seed.
    """
    if n_labels < 1:
        raise DomainError(f"n_labels must be at least 1, got {n_labels}")
    if degenerate:
        return SkewProduct.lift(base)
    rng = np.random.default_rng(seed)
    size = base.p**fiber_rank
    maps = tuple(
        PAdicPermutation.from_array(base.p, fiber_rank, rng.permutation(size))
        for _ in range(n_labels)
    )
    assignment = tuple(int(a) for a in rng.integers(0, n_labels, size=base.size))
    return SkewProduct(base, assignment, maps)


def sample_identity_base_skew(
    p: int, base_rank: int, fiber_rank: int, n_labels: int, seed: Seed
) -> SkewProduct:
    """A random element with the identity as base."""
    return sample_skew(PAdicPermutation.identity(p, base_rank), fiber_rank, n_labels, seed)


def sample_rotation_skew(
    base: PAdicPermutation, n_labels: int, seed: Seed, max_denominator: int = 12
) -> SkewProduct:
    """Fibers are rotations by random rationals with denominator at most ``max_denominator``."""
    if n_labels < 1:
        raise DomainError(f"n_labels must be at least 1, got {n_labels}")
    rng = np.random.default_rng(seed)
    maps = []
    for _ in range(n_labels):
        den = int(rng.integers(2, max_denominator + 1))
        maps.append(IntervalExchange.rotation(Fraction(int(rng.integers(0, den)), den)))
    assignment = tuple(int(a) for a in rng.integers(0, n_labels, size=base.size))
    return SkewProduct(base, assignment, tuple(maps))


def sample_corpus(
    seed: int, count: int, p: int = 2, max_rank: int = 3
) -> list[SkewProduct]:
    """``count`` random skew products with base and fiber ranks in ``1 .. max_rank``."""
    corpus = []
    for child in spawn_seeds(seed, count):
        rng = np.random.default_rng(child)
        base_rank = int(rng.integers(1, max_rank + 1))
        fiber_rank = int(rng.integers(1, max_rank + 1))
        n_labels = int(rng.integers(1, p**base_rank + 1))
        base = sample_base(p, base_rank, rng)
        corpus.append(sample_skew(base, fiber_rank, n_labels, rng))
    return corpus


def sample_conjugator_pair(
    depth: int, n_labels: int, seed: Seed, p: int = 2
) -> tuple[SkewProduct, SkewProduct]:
    """A target and a second skew product over ``odometer(p, depth)``."""
    rng = np.random.default_rng(seed)
    base = odometer(p, depth)
    fiber_rank = int(rng.integers(1, 3))
    target = sample_skew(base, fiber_rank, n_labels, rng)
    hat = sample_skew(base, fiber_rank, n_labels, rng)
    return target, hat


def sample_periodic_rotation_skew(p: int, n_labels: int, seed: Seed) -> SkewProduct:
    """Rotation fibers over the period-``p`` base ``swap(p)``."""
    return sample_rotation_skew(swap(p), n_labels, seed)
