"""
Symmetric-difference measures and the finite-rank weak distance.

``weak_distance(T, S, K)`` is the largest measure ``μ(TD △ SD)`` over the
rank-K cells ``D``: intervals when ``T`` and ``S`` act on X or Y, squares
``E_i × F_j`` when they are skew products on Z.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import TYPE_CHECKING, Optional, Union

import numpy as np

from padicskew.config import check_rank
from padicskew.errors import DomainError, RankError, SpaceMismatchError
from padicskew.models.exchange import FiberMap, IntervalExchange, symdiff_intervals
from padicskew.models.padic import PAdicPermutation, PAdicSet, same_base

if TYPE_CHECKING:
    from padicskew.dynamics.skew import SkewProduct

logger = logging.getLogger(__name__)

Transformation = Union[PAdicPermutation, IntervalExchange, "SkewProduct"]


def symdiff_measure(a: PAdicSet, b: PAdicSet) -> Fraction:
    """Return ``measure(a △ b)``.

    Raises:
        BaseMismatchError: If ``a`` and ``b`` use different bases.
    """
    return a.symmetric_difference(b).measure


def _interval_distance(t: FiberMap, s: FiberMap, rank: int, p: int) -> Fraction:
    if isinstance(t, PAdicPermutation) and isinstance(s, PAdicPermutation):
        fine = max(rank, t.rank, s.rank)
        width = p ** (fine - rank)
        left = t.refine(fine).array.reshape(-1, width)
        right = s.refine(fine).array.reshape(-1, width)
        worst = 0
        for a, b in zip(left, right):
            common = np.intersect1d(a, b, assume_unique=True).size
            worst = max(worst, 2 * (width - common))
        return Fraction(worst, p**fine)
    size = p**rank
    worst = Fraction(0)
    for j in range(size):
        lo, hi = Fraction(j, size), Fraction(j + 1, size)
        worst = max(worst, symdiff_intervals(t.image_intervals(lo, hi), s.image_intervals(lo, hi)))
    return worst


def _square_distance_padic(t: SkewProduct, s: SkewProduct, rank: int) -> Fraction:
    p = t.p
    fine = max(rank, t.max_rank, s.max_rank)
    check_rank(p, fine)
    width = p ** (fine - rank)
    blocks = p**rank

    def grouped(sigma: np.ndarray) -> np.ndarray:
        grid = sigma.reshape(blocks, width, blocks, width).transpose(0, 2, 1, 3)
        return grid.reshape(blocks * blocks, width * width)

    left, right = grouped(t.cell_map(fine)), grouped(s.cell_map(fine))
    worst = 0
    for a, b in zip(left, right):
        common = np.intersect1d(a, b, assume_unique=True).size
        worst = max(worst, 2 * (width * width - common))
    return Fraction(worst, p ** (2 * fine))


def _square_distance_general(t: SkewProduct, s: SkewProduct, rank: int) -> Fraction:
    p = t.p
    base_rank = max(rank, t.base_rank, s.base_rank)
    check_rank(p, base_rank)
    t_base = t.base.refine(base_rank).inverse().array
    s_base = s.base.refine(base_rank).inverse().array
    t_cells, s_cells = t.cells_at(base_rank), s.cells_at(base_rank)
    width = p ** (base_rank - rank)
    size = p**rank
    cell_measure = Fraction(1, p**base_rank)
    worst = Fraction(0)
    for i in range(size):
        for j in range(size):
            lo, hi = Fraction(j, size), Fraction(j + 1, size)
            total = Fraction(0)
            for u in range(p**base_rank):
                t_pre, s_pre = t_base[u], s_base[u]
                left = t_cells[t_pre].image_intervals(lo, hi) if t_pre // width == i else []
                right = s_cells[s_pre].image_intervals(lo, hi) if s_pre // width == i else []
                if left or right:
                    total += symdiff_intervals(left, right)
            worst = max(worst, total * cell_measure)
    return worst


def weak_distance(
    t: Transformation, s: Transformation, rank: int, p: Optional[int] = None
) -> Fraction:
    """Return ``max_D μ(TD △ SD)`` over the rank-``rank`` cells ``D``.

    ``T ∈ N_ε(S)`` at rank ``rank`` exactly when the result is below ``ε``.

    Args:
        t: A map of X or Y (p-adic permutation or interval exchange) or a
            skew product on Z.
        s: A map of the same space.
        rank: Rank ``K`` of the test cells.
        p: Base of the test cells. Required only when both maps are interval
            exchanges.

    Raises:
        SpaceMismatchError: If one map acts on Z and the other on an interval.
        BaseMismatchError: If the maps use different bases.
    """
    from padicskew.dynamics.skew import SkewProduct

    if rank < 0:
        raise RankError(f"Rank must be non-negative, got {rank}")
    on_z = [isinstance(m, SkewProduct) for m in (t, s)]
    if on_z[0] != on_z[1]:
        raise SpaceMismatchError("Cannot compare a map of Z with a map of an interval")
    if all(on_z):
        same_base(t.p, s.p, *(() if p is None else (p,)))
        if t.is_padic and s.is_padic:
            return _square_distance_padic(t, s, rank)
        logger.debug("weak_distance on Z with interval-exchange fibers at rank %d", rank)
        return _square_distance_general(t, s, rank)
    bases = [m.p for m in (t, s) if isinstance(m, PAdicPermutation)]
    if p is not None:
        bases.append(p)
    if not bases:
        raise DomainError("p is required to compare two interval exchanges")
    p = same_base(*bases)
    check_rank(p, rank)
    return _interval_distance(t, s, rank, p)
