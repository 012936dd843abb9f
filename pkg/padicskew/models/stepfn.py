"""
Rational-valued step functions on ``X = [0, 1)`` and on ``Z = X × Y``.

A :class:`StepFunctionX` is constant on each rank-K interval of X. A
:class:`StepFunctionZ` is constant on each rank-K square ``E_i × F_j`` and is
stored as a ``p^K × p^K`` matrix with rows indexed by base cells. Values are
numpy object arrays of :class:`fractions.Fraction`, marked read-only.

Norms are returned squared so that they stay rational.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, ClassVar, Iterable, Union

import numpy as np

from padicskew.config import check_rank
from padicskew.errors import DomainError, RankError, SpaceMismatchError
from padicskew.models.padic import PAdicSet, common_rank, same_base
from padicskew.utils.rational import as_rational

Scalar = Union[Fraction, int]


def _to_fraction(value: Any) -> Fraction:
    if isinstance(value, np.integer):
        return Fraction(int(value))
    if isinstance(value, (float, np.floating)):
        raise DomainError(f"Step function values must be exact rationals, got float {value!r}")
    return as_rational(value, "values")


def _object_array(values: Any, shape: tuple[int, ...]) -> np.ndarray:
    raw = np.asarray(values, dtype=object)
    if raw.shape != shape:
        raise DomainError(f"Expected values of shape {shape}, got {raw.shape}")
    out = np.empty(raw.size, dtype=object)
    out[:] = [_to_fraction(v) for v in raw.ravel()]
    out = out.reshape(shape)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class _StepFunction:
    """Shared algebra of step functions on X and Z.

    Attributes:
        p: Base of the p-adic grid.
        rank: Rank K of the cells.
        values: Exact values, one per cell.
    """

    p: int
    rank: int
    values: np.ndarray

    NDIM: ClassVar[int] = 1
    SPACE: ClassVar[str] = ""

    def __post_init__(self) -> None:
        if self.p < 2:
            raise DomainError(f"p must be an integer >= 2, got {self.p}")
        if self.rank < 0:
            raise RankError(f"Rank must be non-negative, got {self.rank}")
        check_rank(self.p, self.rank)
        shape = (self.p**self.rank,) * self.NDIM
        object.__setattr__(self, "values", _object_array(self.values, shape))

    @classmethod
    def constant(cls, p: int, value: Scalar, rank: int = 0):
        shape = (p**rank,) * cls.NDIM
        values = np.empty(shape, dtype=object)
        values.fill(Fraction(value))
        return cls(p, rank, values)

    @classmethod
    def zero(cls, p: int, rank: int = 0):
        return cls.constant(p, 0, rank)

    @property
    def cell_measure(self) -> Fraction:
        return Fraction(1, self.p ** (self.rank * self.NDIM))

    def refine(self, rank: int):
        """Represent the same function on rank-``rank`` cells."""
        if rank < self.rank:
            raise RankError(f"Cannot refine rank {self.rank} down to rank {rank}")
        if rank == self.rank:
            return self
        check_rank(self.p, rank)
        width = self.p ** (rank - self.rank)
        values = self.values
        for axis in range(self.NDIM):
            values = np.repeat(values, width, axis=axis)
        return type(self)(self.p, rank, values)

    def _aligned(self, other: _StepFunction) -> tuple[np.ndarray, np.ndarray, int]:
        if type(other) is not type(self):
            raise SpaceMismatchError(
                f"Cannot combine a function on {self.SPACE} with one on {other.SPACE}"
            )
        same_base(self.p, other.p)
        rank = max(self.rank, other.rank)
        return self.refine(rank).values, other.refine(rank).values, rank

    def product(self, other: _StepFunction):
        a, b, rank = self._aligned(other)
        return type(self)(self.p, rank, a * b)

    def difference(self, other: _StepFunction):
        a, b, rank = self._aligned(other)
        return type(self)(self.p, rank, a - b)

    def add(self, other: _StepFunction):
        a, b, rank = self._aligned(other)
        return type(self)(self.p, rank, a + b)

    def scale(self, c: Scalar):
        return type(self)(self.p, self.rank, self.values * Fraction(c))

    __mul__ = product
    __sub__ = difference
    __add__ = add

    def __neg__(self):
        return self.scale(-1)

    def integral(self) -> Fraction:
        return Fraction(self.values.sum()) * self.cell_measure

    def l2_norm_sq(self) -> Fraction:
        """Return ``‖f‖²``, the sum of ``value² · cell-measure``."""
        return Fraction((self.values * self.values).sum()) * self.cell_measure

    def l1_norm(self) -> Fraction:
        return Fraction(np.abs(self.values).sum()) * self.cell_measure

    def sup_norm(self) -> Fraction:
        return Fraction(np.abs(self.values).max())

    def is_indicator(self) -> bool:
        return all(v in (0, 1) for v in self.values.ravel())

    def is_constant(self, value: Scalar) -> bool:
        return all(v == value for v in self.values.ravel())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, _StepFunction) or type(other) is not type(self):
            return NotImplemented
        if self.p != other.p:
            return False
        a, b, _ = self._aligned(other)
        return bool(np.all(a == b))

    __hash__ = None  # type: ignore[assignment]

    def to_dict(self) -> dict:
        from padicskew.utils.rational import format_rational

        formatted = np.vectorize(format_rational, otypes=[object])(self.values)
        return {"p": self.p, "rank": self.rank, "values": formatted.tolist()}

    def __repr__(self) -> str:
        return f"{type(self).__name__}(p={self.p}, rank={self.rank}, values={self.values.tolist()})"


class StepFunctionX(_StepFunction):
    """A function on X, constant on rank-K intervals."""

    NDIM = 1
    SPACE = "X"


class StepFunctionZ(_StepFunction):
    """A function on Z, constant on rank-K squares ``E_i × F_j``."""

    NDIM = 2
    SPACE = "Z"

    def row_means(self) -> StepFunctionX:
        """Average each row over the fiber, giving a function on X."""
        size = self.p**self.rank
        return StepFunctionX(self.p, self.rank, self.values.sum(axis=1) * Fraction(1, size))

    def fiber_norm_sq(self) -> StepFunctionX:
        """The squared fiber norm ``x -> ∫ |f(x, y)|² dν(y)``."""
        return (self * self).row_means()


def indicator(s: PAdicSet) -> StepFunctionX:
    """Indicator of a p-adic set of X (or of Y)."""
    return StepFunctionX(s.p, s.rank, s.mask().astype(int).astype(object))


def rectangle_indicator(base: PAdicSet, fiber: PAdicSet) -> StepFunctionZ:
    """Indicator of the rectangle ``base × fiber``."""
    rank = common_rank(base, fiber)
    rows = base.refine(rank).mask().astype(int)
    cols = fiber.refine(rank).mask().astype(int)
    return StepFunctionZ(base.p, rank, np.outer(rows, cols).astype(object))


def rectangles_indicator(rectangles: Iterable[tuple[PAdicSet, PAdicSet]]) -> StepFunctionZ:
    """Indicator of a union of rectangles.

    Raises:
        DomainError: If the list is empty.
    """
    rectangles = list(rectangles)
    if not rectangles:
        raise DomainError("A rectangle union needs at least one rectangle")
    p = same_base(*(s.p for pair in rectangles for s in pair))
    rank = common_rank(*(s for pair in rectangles for s in pair))
    mask = np.zeros((p**rank, p**rank), dtype=bool)
    for base, fiber in rectangles:
        mask |= np.outer(base.refine(rank).mask(), fiber.refine(rank).mask())
    return StepFunctionZ(p, rank, mask.astype(int).astype(object))


def square_indicator(p: int, rank: int, i: int, j: int) -> StepFunctionZ:
    """Indicator of the square ``D_ij = E_i × F_j`` of rank ``rank``."""
    return rectangle_indicator(PAdicSet(p, rank, (i,)), PAdicSet(p, rank, (j,)))


def fiber_indicator(fiber: PAdicSet) -> StepFunctionZ:
    """Indicator of ``X × fiber``."""
    return rectangle_indicator(PAdicSet.full(fiber.p), fiber)


def base_indicator(base: PAdicSet) -> StepFunctionZ:
    """Indicator of ``base × Y``."""
    return lift_x(indicator(base))


def half_fiber_indicator(p: int = 2) -> StepFunctionZ:
    """Indicator of ``A = X × [0, 1/2)``.

    Raises:
        DomainError: If ``p`` is odd, so that ``1/2`` is not a p-adic point.
    """
    if p % 2:
        raise DomainError(f"X × [0, 1/2) is not a p-adic set for odd p={p}")
    return fiber_indicator(PAdicSet(p, 1, tuple(range(p // 2))))


def lift_x(f: StepFunctionX) -> StepFunctionZ:
    """The function ``(x, y) -> f(x)`` on Z."""
    size = f.p**f.rank
    return StepFunctionZ(f.p, f.rank, np.repeat(f.values[:, None], size, axis=1))
