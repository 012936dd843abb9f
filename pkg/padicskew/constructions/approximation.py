"""
p-adic approximation of interval exchanges and the periodic rigidification.

``padic_approx`` snaps the breakpoints of an exchange to the rank-k grid and
lays the snapped pieces out in the original destination order, increasing
``k`` until every reference interval moves less than ``eps``. Rotations stay
rotations under snapping.

``periodic_rigidify`` replaces every fiber of a skew product over a
period-``p`` base by such an approximation, with the accuracy of fiber
``k`` scaled by ``1 / (2 N m(A_k))`` so that the squares of the reference
rank move by less than ``eps / 2`` in total.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from padicskew.config import check_rank, get_config, max_rank
from padicskew.dynamics.base_maps import check_period
from padicskew.dynamics.skew import SkewProduct
from padicskew.errors import (
    CapExceededError,
    DomainError,
    ResolutionError,
    VerificationError,
)
from padicskew.models.distance import weak_distance
from padicskew.models.exchange import FiberMap, IntervalExchange, Piece
from padicskew.models.padic import PAdicPermutation

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Approximation:
    """A p-adic permutation close to an exchange.

    Attributes:
        permutation: The approximating permutation.
        discrepancy: Largest ``ν(R F △ P F)`` over reference intervals ``F``.
        rank: Rank of ``permutation``.
        reference_rank: Rank of the reference intervals.
    """

    permutation: PAdicPermutation
    discrepancy: Fraction
    rank: int
    reference_rank: int


@dataclass(frozen=True)
class Rigidification:
    """Output of :func:`periodic_rigidify`.

    Attributes:
        skew: The periodic skew product ``Q``.
        weak_distance: ``weak_distance(S, Q, reference_rank)``.
        max_rank: ``M``, the largest rank among the approximating fibers.
        period_exponent: ``M + 1``; ``Q^{p^{M+1}}`` is the identity.
        reference_rank: Rank of the test squares.
        approximations: One approximation per fiber map of ``S``.
    """

    skew: SkewProduct
    weak_distance: Fraction
    max_rank: int
    period_exponent: int
    reference_rank: int
    approximations: tuple[Approximation, ...] = field(repr=False, default=())

    @property
    def period(self) -> int:
        return self.skew.p**self.period_exponent

    def to_dict(self) -> dict:
        from padicskew.utils.rational import format_rational

        return {
            "weak_distance": format_rational(self.weak_distance),
            "M": self.max_rank,
            "period": self.period,
            "rank": self.reference_rank,
        }


def default_reference_rank(p: int, eps: Fraction) -> int:
    """Smallest ``K >= 1`` with ``p^-K < eps``."""
    rank = 1
    while Fraction(1, p**rank) >= eps:
        rank += 1
    return rank


def _snap(exchange: IntervalExchange, p: int, rank: int) -> IntervalExchange:
    scale = p**rank
    snapped: list[tuple[Fraction, Fraction, Fraction]] = []
    for piece in exchange.pieces:
        start = Fraction(math.floor(piece.start * scale + Fraction(1, 2)), scale)
        end = Fraction(math.floor(piece.end * scale + Fraction(1, 2)), scale)
        if start < end:
            snapped.append((start, end, piece.start + piece.shift))
    cursor = Fraction(0)
    placed: dict[Fraction, Fraction] = {}
    for start, end, _ in sorted(snapped, key=lambda s: s[2]):
        placed[start] = cursor - start
        cursor += end - start
    return IntervalExchange(tuple(Piece(start, end, placed[start]) for start, end, _ in snapped))


def padic_approx(
    r: FiberMap,
    eps: Union[Fraction, int],
    p: int,
    rank: Optional[int] = None,
) -> Approximation:
    """Approximate an exchange ``R`` by a p-adic permutation ``P``.

    ``P`` satisfies ``ν(R F △ P F) < eps`` for every p-adic interval ``F`` of
    the reference rank.

    Args:
        r: The map to approximate.
        eps: Accuracy, ``eps > 0``.
        p: Base of the approximation.
        rank: Reference rank; defaults to the smallest ``K`` with ``p^-K < eps``.

    Raises:
        ResolutionError: If the configured rank cap is too small; carries the
            rank that would be required when the search finds it.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise DomainError(f"eps must be positive, got {eps}")
    reference = default_reference_rank(p, eps) if rank is None else rank
    check_rank(p, reference, "reference rank")

    exact: Optional[PAdicPermutation] = None
    if isinstance(r, PAdicPermutation):
        exact = r
    else:
        try:
            exact = r.as_permutation(p)
        except CapExceededError:
            logger.debug("Exchange is p-adic only above the rank cap; snapping instead")
    if exact is not None:
        if exact.p != p:
            raise DomainError(f"Permutation uses p={exact.p}, expected p={p}")
        return Approximation(exact, Fraction(0), exact.rank, reference)

    exchange = r if isinstance(r, IntervalExchange) else r.to_exchange()
    cap = max_rank(p)
    for k in range(reference, get_config().max_search_rank + 1):
        snapped = _snap(exchange, p, k)
        discrepancy = weak_distance(exchange, snapped, reference, p=p)
        logger.debug("Snapping at rank %d gives discrepancy %s", k, discrepancy)
        if discrepancy >= eps:
            continue
        if k > cap:
            raise ResolutionError(
                f"Accuracy {eps} needs rank {k}, above the configured cap {cap} for p={p}",
                required_rank=k,
            )
        permutation = snapped.as_permutation(p)
        if permutation is None:
            raise VerificationError("Snapped exchange is not a p-adic permutation")
        return Approximation(permutation, discrepancy, permutation.rank, reference)
    raise ResolutionError(
        f"Accuracy {eps} not reached below rank {get_config().max_search_rank} for p={p}"
    )


def periodic_rigidify(
    t0: PAdicPermutation,
    s: SkewProduct,
    eps: Union[Fraction, int],
    rank: Optional[int] = None,
) -> Rigidification:
    """Replace the fibers of ``S`` by p-adic approximations to get a periodic ``Q``.

    Args:
        t0: Base map of ``S``; its period must be exactly ``p``.
        s: Skew product over ``t0`` whose fibers are exchanges or permutations.
        eps: Target accuracy; ``weak_distance(S, Q, K) < eps / 2``.
        rank: Reference rank ``K``; defaults to the larger of the base rank
            and the smallest ``K`` with ``p^-K < eps``.

    Raises:
        DomainError: If ``t0`` does not have period ``p`` or is not the base of ``s``.
        ResolutionError: If a fiber cannot be approximated within the cap.
        VerificationError: If the distance or period check fails.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise DomainError(f"eps must be positive, got {eps}")
    p = s.p
    check_period(t0, p)
    if s.base != t0:
        raise DomainError("t0 is not the base map of the skew product")
    if rank is None:
        rank = max(s.base_rank, default_reference_rank(p, eps))
    check_rank(p, rank, "reference rank")

    n_cells = s.n_cells
    approximations = []
    for fiber, cell in zip(s.fiber_maps, s.partition()):
        local_eps = eps / (2 * n_cells * cell.measure)
        approximations.append(padic_approx(fiber, local_eps, p, rank))
    q = SkewProduct(s.base, s.assignment, tuple(a.permutation for a in approximations))

    distance = weak_distance(s, q, rank)
    if distance >= eps / 2:
        raise VerificationError(f"Weak distance {distance} is not below eps/2 = {eps / 2}")
    exponent = q.fiber_rank + 1
    if not q.power(p**exponent).is_identity():
        raise VerificationError(f"Q^{p ** exponent} is not the identity")
    logger.info("Rigidified with M=%d; Q^%d is the identity", q.fiber_rank, p**exponent)
    return Rigidification(q, distance, q.fiber_rank, exponent, rank, tuple(approximations))
