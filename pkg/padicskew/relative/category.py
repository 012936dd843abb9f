"""
Finite-rank membership tests for the category sets.

``A`` is the half-fiber set ``X × [0, 1/2)``. A transformation lies in
``P'_k`` when ``μ(T^k A ∩ A) > 9/20`` and in ``M'_k`` when
``‖E(T^k χ_A · χ_A | X) − 1/4‖ <= 1/5``. Norm thresholds are compared
squared, so ``1/5`` becomes ``1/25`` and ``1/k`` becomes ``1/k²``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from padicskew.config import check_rank
from padicskew.dynamics.skew import SkewProduct, conjugate, koopman_pullback
from padicskew.errors import DomainError, ExclusionViolation
from padicskew.models.stepfn import (
    StepFunctionX,
    StepFunctionZ,
    half_fiber_indicator,
    square_indicator,
)
from padicskew.relative.conditional import cond_exp, rigidity_defect_from_power

logger = logging.getLogger(__name__)

RETURN_THRESHOLD = Fraction(9, 20)
MIXING_RADIUS_SQ = Fraction(1, 25)
QUARTER = Fraction(1, 4)
HALF = Fraction(1, 2)


@dataclass(frozen=True)
class CategoryRow:
    """Membership of ``T`` in ``P'_k`` and ``M'_k``."""

    k: int
    in_P: bool
    in_M: bool
    mu_TkA_capA: Fraction
    defect_sq: Fraction

    @property
    def violates_exclusion(self) -> bool:
        return self.in_P and self.in_M

    def to_dict(self) -> dict:
        from padicskew.utils.rational import format_rational

        return {
            "k": self.k,
            "in_P": self.in_P,
            "in_M": self.in_M,
            "mu_TkA_capA": format_rational(self.mu_TkA_capA),
            "defect_sq": format_rational(self.defect_sq),
        }


@dataclass(frozen=True)
class ExclusionChain:
    """Both sides of ``(μ(T^k A ∩ A) − 1/4)² <= ‖E(T^k χ_A · χ_A | X) − 1/4‖²``."""

    lower_sq: Fraction
    defect_sq: Fraction

    @property
    def holds(self) -> bool:
        return self.lower_sq <= self.defect_sq


def _return_data(power: SkewProduct) -> tuple[Fraction, Fraction]:
    a = half_fiber_indicator(power.p)
    overlap = koopman_pullback(power, a) * a
    deviation = cond_exp(overlap) - StepFunctionX.constant(power.p, QUARTER)
    return overlap.integral(), deviation.l2_norm_sq()


def category_row_from_power(power: SkewProduct, k: int) -> CategoryRow:
    mu, defect = _return_data(power)
    return CategoryRow(k, mu > RETURN_THRESHOLD, defect <= MIXING_RADIUS_SQ, mu, defect)


def category_predicates(t: SkewProduct, k: int) -> CategoryRow:
    """Evaluate ``T ∈ P'_k`` and ``T ∈ M'_k``.

    Args:
        t: The skew product; its base ``p`` must be even.
        k: Time, ``k >= 1``.

    Returns:
        The row with both predicates and the exact ``μ(T^k A ∩ A)``.
    """
    if k < 1:
        raise DomainError(f"k must be at least 1, got {k}")
    return category_row_from_power(t.power(k), k)


def exclusion_chain(t: SkewProduct, k: int) -> ExclusionChain:
    """Return both sides of the inequality that keeps ``P'_k`` out of ``M'_k``."""
    if k < 1:
        raise DomainError(f"k must be at least 1, got {k}")
    mu, defect = _return_data(t.power(k))
    return ExclusionChain((mu - QUARTER) ** 2, defect)


def sweep_categories(t: SkewProduct, k_max: int) -> list[CategoryRow]:
    """Rows for ``k = 1 .. k_max``.

    Raises:
        ExclusionViolation: If some row lies in both ``P'_k`` and ``M'_k``.
    """
    rows = [category_row_from_power(power, k) for k, power in t.iter_powers(k_max)]
    for row in rows:
        if row.violates_exclusion:
            raise ExclusionViolation(
                f"T lies in both P'_{row.k} and M'_{row.k}",
                {"transformation": t.to_dict(), "row": row.to_dict()},
            )
    return rows


@dataclass(frozen=True)
class DenseFamily:
    """A finite family of test functions on Z.

    Attributes:
        p: Base of the grid.
        rank: Rank K of the members.
        members: Step functions with conditional norm at most 1.
    """

    p: int
    rank: int
    members: tuple[StepFunctionZ, ...]

    def __post_init__(self) -> None:
        for index, member in enumerate(self.members):
            if conditional_norm_sq(member) > 1:
                raise DomainError(f"Family member {index} has conditional norm above 1")

    def __len__(self) -> int:
        return len(self.members)

    def member(self, index: int) -> StepFunctionZ:
        if not 0 <= index < len(self.members):
            raise DomainError(
                f"Family index {index} out of range for {len(self.members)} members"
            )
        return self.members[index]


def conditional_norm_sq(f: StepFunctionZ) -> Fraction:
    """Return ``‖‖f‖_{L²(Z|X)}‖²_{L^∞(X)}``, the largest squared fiber norm."""
    return f.fiber_norm_sq().sup_norm()


def dense_family(p: int, rank: int) -> DenseFamily:
    """All ``p^K · p^K`` square indicators of rank ``K``, base index major."""
    check_rank(p, rank)
    size = p**rank
    members = tuple(square_indicator(p, rank, i, j) for i in range(size) for j in range(size))
    return DenseFamily(p, rank, members)


def in_U(t: SkewProduct, family: DenseFamily, i: int, j: int, k: int, n: int) -> bool:
    """True when the rigidity defect of ``(f_i, f_j)`` at time ``n`` is below ``1/k``."""
    if k < 1:
        raise DomainError(f"k must be at least 1, got {k}")
    if n < 0:
        raise DomainError(f"n must be non-negative, got {n}")
    f, g = family.member(i), family.member(j)
    return rigidity_defect_from_power(t.power(n), f, g) < Fraction(1, k * k)


def _rigid_at(power: SkewProduct, family: DenseFamily, bound: Fraction) -> bool:
    lifted = SkewProduct.lift(power.base)
    moved = [koopman_pullback(power, f) - koopman_pullback(lifted, f) for f in family.members]
    for difference in moved:
        for g in family.members:
            if (cond_exp(difference * g)).l2_norm_sq() > bound:
                return False
    return True


def certify_relative_rigidity(
    t: SkewProduct, family: DenseFamily, n_max: int, tol: Union[Fraction, int] = 0
) -> list[int]:
    """Return every ``n <= n_max`` at which all family pairs have defect² ``<= tol²``.

    With ``tol = 0`` these are exact relative-rigidity times.
    """
    if n_max < 1:
        raise DomainError(f"n_max must be at least 1, got {n_max}")
    if tol < 0:
        raise DomainError(f"tol must be non-negative, got {tol}")
    bound = Fraction(tol) ** 2
    times = [n for n, power in t.iter_powers(n_max) if _rigid_at(power, family, bound)]
    logger.info("Certified %d relative-rigidity times up to n=%d", len(times), n_max)
    return times


@dataclass(frozen=True)
class BoundCheck:
    """``lhs_sq = ‖E(g·h|X)‖²`` and ``rhs_sq = sup fiber-norm²(g) · ‖h‖²``."""

    lhs_sq: Fraction
    rhs_sq: Fraction

    @property
    def holds(self) -> bool:
        return self.lhs_sq <= self.rhs_sq


def cond_exp_bound_check(g: StepFunctionZ, h: StepFunctionZ) -> BoundCheck:
    """Evaluate both sides of ``‖E(g·h|X)‖ <= ‖‖g‖_{L²(Z|X)}‖_∞ ‖h‖``."""
    return BoundCheck(cond_exp(g * h).l2_norm_sq(), conditional_norm_sq(g) * h.l2_norm_sq())


def is_half_fiber_set(a: StepFunctionZ) -> bool:
    """True when ``a`` is an indicator whose fiber average is identically 1/2.

    Raises:
        DomainError: If ``a`` is not 0/1-valued.
    """
    if not a.is_indicator():
        raise DomainError("is_half_fiber_set expects an indicator function")
    return cond_exp(a).is_constant(HALF)


def transport_check(t: SkewProduct, s: SkewProduct, a: StepFunctionZ, n: int) -> bool:
    """Check ``E((S^-1 T S)^n f · f | X) = E(T^n χ_A · χ_A | X)`` for ``f = S^-1 χ_A``.

    Raises:
        DomainError: If ``s`` has a non-identity base, ``a`` is not a half-fiber
            indicator, or ``n`` is negative.
    """
    if not s.has_identity_base:
        raise DomainError("The transport map must have the identity as its base map")
    if not is_half_fiber_set(a):
        raise DomainError("The test set must have fiber measure 1/2 over every base point")
    if n < 0:
        raise DomainError(f"n must be non-negative, got {n}")
    f = koopman_pullback(s.inverse(), a)
    conjugated = conjugate(s, t).power(n)
    lhs = cond_exp(koopman_pullback(conjugated, f) * f)
    rhs = cond_exp(koopman_pullback(t.power(n), a) * a)
    return lhs == rhs
