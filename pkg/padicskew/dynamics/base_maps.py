"""
Base maps on X: odometers, rotations and periodic permutations.
"""

from __future__ import annotations

import logging

import numpy as np

from padicskew.config import check_rank
from padicskew.errors import DomainError, RankError
from padicskew.models.padic import PAdicPermutation

logger = logging.getLogger(__name__)


def digit_reversal(p: int, depth: int) -> np.ndarray:
    """Return ``rev`` with ``rev[j]`` the index whose base-p digits are those of ``j`` reversed."""
    indices = np.arange(p**depth, dtype=np.int64)
    rev = np.zeros_like(indices)
    rest = indices.copy()
    for _ in range(depth):
        rev = rev * p + rest % p
        rest //= p
    return rev


def odometer(p: int, depth: int) -> PAdicPermutation:
    """The rank-``depth`` adding machine.

    Interval ``j`` is sent to the interval whose reversed digit string is
    that of ``j`` plus one, with carry. The result is a single cycle of
    length ``p^depth``, and its ``p^m``-th power fixes every rank-``m``
    interval setwise.

    Args:
        p: Base, at least 2.
        depth: Rank ``D >= 1``.

    Raises:
        RankError: If ``depth < 1``.
        CapExceededError: If ``depth`` exceeds the configured cap.
    """
    if p < 2:
        raise DomainError(f"p must be an integer >= 2, got {p}")
    if depth < 1:
        raise RankError(f"Odometer depth must be at least 1, got {depth}")
    check_rank(p, depth, "odometer depth")
    rev = digit_reversal(p, depth)
    mapping = rev[(rev + 1) % p**depth]
    return PAdicPermutation.from_array(p, depth, mapping)


def swap(p: int = 2) -> PAdicPermutation:
    """The rank-1 rotation by ``1/p``; for ``p = 2`` this swaps the two halves."""
    return PAdicPermutation.translation(p, 1, 1)


def rotation(p: int, rank: int, shift: int = 1) -> PAdicPermutation:
    """Rotation of X by ``shift / p^rank``."""
    return PAdicPermutation.translation(p, rank, shift)


def check_period(base: PAdicPermutation, period: int) -> None:
    """Raise :class:`DomainError` unless ``base`` has point-map period exactly ``period``."""
    actual = base.period
    if actual != period:
        raise DomainError(f"Base map has period {actual}, expected exactly {period}")


def fixes_rank_intervals(base: PAdicPermutation, n: int, rank: int) -> bool:
    """Check that ``base^n`` maps every rank-``rank`` interval onto itself."""
    power = base.power(n)
    target = max(rank, power.rank)
    width = base.p ** (target - rank)
    refined = power.refine(target).array
    return bool(np.all(refined // width == np.arange(base.p**target) // width))
