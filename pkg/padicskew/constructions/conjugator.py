"""
The fiberwise conjugator over a refined Rokhlin tower.

Given a target ``T`` and a second skew product ``T̂`` over the same base,
``fiberwise_conjugator`` builds an identity-base ``S`` with
``(S^-1 T̂ S)_x = T_x`` on every tower level except the top one. ``S`` is the
identity on the tower base and off the tower; along a column it follows

    S_{T0 x} = T̂_x ∘ S_x ∘ R_{α(l, i)}^-1

where ``R_{α(l, i)}`` is the target fiber on the partition cell of level ``i``.
The conjugate then differs from ``T`` only over the top level and the
residual, which bounds the weak distance by ``residual + m(B)``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from padicskew.constructions.towers import RefinedTower, refine_tower, rokhlin_tower
from padicskew.dynamics.skew import SkewProduct, conjugate
from padicskew.errors import DomainError, RankError, ResolutionError, VerificationError
from padicskew.models.distance import weak_distance
from padicskew.models.padic import PAdicPermutation, same_base

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConjugatorCertificate:
    """Exact evidence for a conjugator run.

    Attributes:
        levels_verified: Number of tower levels on which the fiberwise
            identity was checked.
        bound: ``residual + m(B)``.
        weak_distance: ``weak_distance(T, S^-1 T̂ S, rank)``.
        rank: Rank of the weak-distance test cells.
    """

    levels_verified: int
    bound: Fraction
    weak_distance: Fraction
    rank: int

    def within(self, eps: Union[Fraction, int]) -> bool:
        return self.weak_distance < eps

    def to_dict(self) -> dict:
        from padicskew.utils.rational import format_rational

        return {
            "levels_verified": self.levels_verified,
            "bound": format_rational(self.bound),
            "weak_distance": format_rational(self.weak_distance),
        }


def required_depth(p: int, eps: Fraction) -> int:
    """Smallest ``D`` with ``p^D > 1/eps``."""
    depth = 0
    while Fraction(p**depth) <= 1 / eps:
        depth += 1
    return depth


def _check_pair(target: SkewProduct, hat: SkewProduct, rt: RefinedTower) -> None:
    same_base(target.p, hat.p, rt.tower.base_map.p)
    if target.base != hat.base or target.base != rt.tower.base_map:
        raise DomainError("Target, hat and tower must share the same base map")
    if not (target.is_padic and hat.is_padic):
        raise DomainError("The conjugator needs p-adic fiber maps on both skew products")
    if max(target.base_rank, hat.base_rank) > rt.rank:
        raise RankError(
            f"Tower rank {rt.rank} is coarser than the skew products' base rank "
            f"{max(target.base_rank, hat.base_rank)}"
        )
    partition = np.asarray(target.refine_base(rt.rank).assignment)
    if not np.array_equal(partition, np.asarray(rt.partition)):
        raise DomainError("The tower was not refined by the target's fiber partition")


def fiberwise_conjugator(
    target: SkewProduct,
    hat: SkewProduct,
    rt: RefinedTower,
    eps: Optional[Fraction] = None,
) -> SkewProduct:
    """Build the identity-base conjugator ``S`` column by column.

    Args:
        target: The skew product ``T`` to approximate.
        hat: The skew product ``T̂`` to conjugate.
        rt: Tower over the common base, refined by ``target``'s partition.
        eps: Accuracy the tower bound must beat, if any.

    Returns:
        ``S`` with the identity as base.

    Raises:
        DomainError: If the three inputs do not share a base or partition.
        ResolutionError: If ``residual + m(B) >= eps``.
        VerificationError: If the fiberwise identity fails on a level.
    """
    _check_pair(target, hat, rt)
    tower = rt.tower
    bound = tower.residual + tower.B.measure
    if eps is not None and bound >= eps:
        depth = required_depth(target.p, Fraction(eps))
        raise ResolutionError(
            f"Tower bound {bound} does not beat eps={eps}; a base of depth {depth} is required",
            required_rank=depth,
        )

    p, rank = target.p, rt.rank
    fiber_rank = max(target.fiber_rank, hat.fiber_rank)
    hat_table = hat.fiber_table(rank, fiber_rank)
    fibers = [f.refine(fiber_rank).array for f in target.refine_base(rank).fiber_maps]
    inverses = [np.argsort(f) for f in fibers]

    table = np.broadcast_to(np.arange(p**fiber_rank), (p**rank, p**fiber_rank)).copy()
    for column, labels in zip(rt.columns, rt.labels):
        for i in range(rt.height - 1):
            here, there = column[i], column[i + 1]
            table[there] = hat_table[here][table[here][inverses[labels[i]]]]
    s = SkewProduct.from_fiber_table(PAdicPermutation.identity(p, rank), table)

    conjugated = conjugate(s, hat).fiber_table(rank, fiber_rank)
    expected = target.fiber_table(rank, fiber_rank)
    checked = rt.columns[:, : rt.height - 1].ravel()
    if not np.array_equal(conjugated[checked], expected[checked]):
        raise VerificationError("Fiberwise identity fails on a non-top tower level")
    logger.info("Conjugator verified on %d levels of %d columns", rt.height - 1, len(rt.columns))
    return s


def conjugator_certificate(
    target: SkewProduct,
    hat: SkewProduct,
    s: SkewProduct,
    rt: RefinedTower,
    rank: Optional[int] = None,
) -> ConjugatorCertificate:
    """Measure how close ``S^-1 T̂ S`` is to ``T`` and check it against the tower bound.

    Args:
        rank: Rank of the test squares, at least 1; defaults to the tower rank.

    Raises:
        VerificationError: If the weak distance exceeds ``residual + m(B)``.
    """
    rank = rt.rank if rank is None else rank
    if rank < 1:
        raise RankError(f"Certificate rank must be at least 1, got {rank}")
    bound = rt.tower.residual + rt.tower.B.measure
    distance = weak_distance(target, conjugate(s, hat), rank)
    if distance > bound:
        raise VerificationError(f"Weak distance {distance} exceeds the tower bound {bound}")
    return ConjugatorCertificate(rt.height - 1, bound, distance, rank)


def build_conjugator(
    target: SkewProduct,
    hat: SkewProduct,
    height: Optional[int] = None,
    eps: Optional[Fraction] = None,
) -> tuple[SkewProduct, RefinedTower, ConjugatorCertificate]:
    """Tower, refinement, conjugator and certificate in one call.

    The tower is built over the target base refined to the rank of both
    skew products. Without ``height`` the shortest cycle length is used.
    """
    rank = max(target.base_rank, hat.base_rank)
    target, hat = target.refine_base(rank), hat.refine_base(rank)
    if height is None:
        height = min(len(c) for c in target.base.cycles())
    tower = rokhlin_tower(target.base, height)
    rt = refine_tower(tower, target.assignment)
    s = fiberwise_conjugator(target, hat, rt, eps)
    certificate = conjugator_certificate(target, hat, s, rt)
    if eps is not None and not certificate.within(eps):
        raise VerificationError(
            f"Weak distance {certificate.weak_distance} does not beat eps={eps}"
        )
    return s, rt, certificate
