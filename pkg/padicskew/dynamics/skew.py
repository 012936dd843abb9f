"""
Piecewise-constant skew products on the unit square.

A :class:`SkewProduct` acts by ``T(x, y) = (T0 x, T_x y)`` where ``T0`` is a
p-adic permutation of X and the fiber map ``T_x`` is constant on each
rank-K_b interval of X. Fiber maps are listed once in ``fiber_maps`` and
referenced by label from ``assignment``.

Group operations work on fiber tables: integer arrays of shape
``(p^K_b, p^K_f)`` whose row ``i`` is the fiber permutation over base cell
``i``. Because the base permutes rank-K_b intervals, the n-step cocycle is
again constant on those intervals and the table keeps its shape.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Optional, Sequence

import numpy as np

from padicskew.config import check_rank
from padicskew.errors import BaseMismatchError, DomainError, RankError, VerificationError
from padicskew.models.exchange import FiberMap, IntervalExchange
from padicskew.models.padic import PAdicPermutation, PAdicSet, cell_of, same_base
from padicskew.models.stepfn import StepFunctionZ

logger = logging.getLogger(__name__)

# Above this many steps, power() switches from the cocycle loop to squaring.
COCYCLE_STEPS = 256


def _rank_of(size: int, p: int) -> int:
    rank = 0
    while p**rank < size:
        rank += 1
    if p**rank != size:
        raise RankError(f"Table width {size} is not a power of p={p}")
    return rank


def _same_fiber(a: FiberMap, b: FiberMap) -> bool:
    if isinstance(a, PAdicPermutation) and isinstance(b, PAdicPermutation):
        return a == b
    left = a.to_exchange() if isinstance(a, PAdicPermutation) else a
    right = b.to_exchange() if isinstance(b, PAdicPermutation) else b
    return left == right


@dataclass(frozen=True)
class PointZ:
    """A point ``(x, y)`` of the unit square."""

    x: Fraction
    y: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", Fraction(self.x))
        object.__setattr__(self, "y", Fraction(self.y))
        for name, value in (("x", self.x), ("y", self.y)):
            if not 0 <= value < 1:
                raise DomainError(f"Coordinate {name}={value} lies outside [0, 1)")


@dataclass(frozen=True, eq=False)
class SkewProduct:
    """A piecewise-constant skew product ``T(x, y) = (T0 x, T_x y)``.

    The fiber maps are put in canonical form at construction: p-adic maps are
    refined to a common ``fiber_rank``, unused maps are dropped, duplicates
    are merged (an exchange equal to a p-adic map is replaced by the p-adic
    map), and maps are ordered by first use in ``assignment``.

    Attributes:
        base: The base permutation ``T0`` of rank ``K_b``.
        assignment: Fiber-map label for each rank-``K_b`` base interval.
        fiber_maps: The distinct fiber maps, p-adic permutations or interval
            exchanges.
    """

    base: PAdicPermutation
    assignment: tuple[int, ...]
    fiber_maps: tuple[FiberMap, ...]

    def __post_init__(self) -> None:
        p = self.base.p
        assignment = tuple(int(a) for a in self.assignment)
        maps = list(self.fiber_maps)
        if len(assignment) != self.base.size:
            raise DomainError(
                f"Assignment has {len(assignment)} labels, base rank {self.base.rank} "
                f"needs {self.base.size}"
            )
        for label in assignment:
            if not 0 <= label < len(maps):
                raise DomainError(f"Label {label} does not index one of {len(maps)} fiber maps")
        for fiber in maps:
            if isinstance(fiber, PAdicPermutation):
                if fiber.p != p:
                    raise BaseMismatchError(
                        f"Fiber map uses p={fiber.p} but the base uses p={p}"
                    )
            elif not isinstance(fiber, IntervalExchange):
                raise DomainError(f"Unsupported fiber map type {type(fiber).__name__}")
        fiber_rank = max(
            (f.rank for f in maps if isinstance(f, PAdicPermutation)), default=0
        )
        check_rank(p, fiber_rank, "fiber rank")
        maps = [f.refine(fiber_rank) if isinstance(f, PAdicPermutation) else f for f in maps]

        labels: dict[object, int] = {}
        canonical: list[FiberMap] = []
        relabelled: list[int] = []
        keys = [f.to_exchange() if isinstance(f, PAdicPermutation) else f for f in maps]
        for label in assignment:
            fiber, key = maps[label], keys[label]
            if key not in labels:
                labels[key] = len(canonical)
                canonical.append(fiber)
            elif isinstance(fiber, PAdicPermutation):
                canonical[labels[key]] = fiber
            relabelled.append(labels[key])
        object.__setattr__(self, "assignment", tuple(relabelled))
        object.__setattr__(self, "fiber_maps", tuple(canonical))

    # -- constructors -------------------------------------------------------

    @classmethod
    def identity(cls, p: int) -> SkewProduct:
        """The identity ``1_Z``."""
        return cls.lift(PAdicPermutation.identity(p))

    @classmethod
    def lift(cls, base: PAdicPermutation) -> SkewProduct:
        """The lifted base ``T0 × 1_Y``."""
        return cls(base, (0,) * base.size, (PAdicPermutation.identity(base.p),))

    @classmethod
    def fiber_only(cls, fiber: FiberMap, p: Optional[int] = None) -> SkewProduct:
        """The map ``1_X × R``."""
        if p is None:
            if not isinstance(fiber, PAdicPermutation):
                raise DomainError("p is required when the fiber map is an interval exchange")
            p = fiber.p
        return cls(PAdicPermutation.identity(p), (0,), (fiber,))

    @classmethod
    def from_fiber_table(cls, base: PAdicPermutation, table: np.ndarray) -> SkewProduct:
        """Build a skew product from a ``(p^K_b, p^K_f)`` fiber table."""
        table = np.asarray(table, dtype=np.int64)
        if table.ndim != 2 or table.shape[0] != base.size:
            raise DomainError(
                f"Fiber table must have shape ({base.size}, p^K_f), got {table.shape}"
            )
        fiber_rank = _rank_of(table.shape[1], base.p)
        labels: dict[bytes, int] = {}
        maps: list[FiberMap] = []
        assignment: list[int] = []
        for row in table:
            key = row.tobytes()
            if key not in labels:
                labels[key] = len(maps)
                maps.append(PAdicPermutation.from_array(base.p, fiber_rank, row))
            assignment.append(labels[key])
        return cls(base, tuple(assignment), tuple(maps))

    # -- structure ----------------------------------------------------------

    @property
    def p(self) -> int:
        return self.base.p

    @property
    def base_rank(self) -> int:
        return self.base.rank

    @cached_property
    def fiber_rank(self) -> int:
        return max(
            (f.rank for f in self.fiber_maps if isinstance(f, PAdicPermutation)), default=0
        )

    @property
    def n_cells(self) -> int:
        """Number ``N`` of distinct fiber maps."""
        return len(self.fiber_maps)

    @property
    def max_rank(self) -> int:
        return max(self.base_rank, self.fiber_rank)

    @property
    def is_padic(self) -> bool:
        """True when every fiber map is a p-adic permutation."""
        return all(isinstance(f, PAdicPermutation) for f in self.fiber_maps)

    @property
    def has_identity_base(self) -> bool:
        return self.base.is_identity()

    def fiber_at(self, index: int) -> FiberMap:
        """Fiber map over base interval ``index`` of rank ``base_rank``."""
        return self.fiber_maps[self.assignment[index]]

    def fiber_at_point(self, x: Fraction) -> FiberMap:
        return self.fiber_at(cell_of(x, self.p, self.base_rank))

    def partition(self) -> list[PAdicSet]:
        """The cells ``A_k``, one per fiber map, as p-adic sets of X."""
        labels = np.asarray(self.assignment)
        return [
            PAdicSet.from_mask(self.p, self.base_rank, labels == k) for k in range(self.n_cells)
        ]

    def cells_at(self, rank: int) -> list[FiberMap]:
        """Fiber maps over each base interval of rank ``rank``."""
        if rank < self.base_rank:
            raise RankError(f"Cannot refine base rank {self.base_rank} down to rank {rank}")
        width = self.p ** (rank - self.base_rank)
        return [self.fiber_maps[a] for a in self.assignment for _ in range(width)]

    def refine_base(self, rank: int) -> SkewProduct:
        """The same map with its base and assignment at rank ``rank``."""
        width = self.p ** (_check(self.base_rank, rank))
        assignment = tuple(a for a in self.assignment for _ in range(width))
        return SkewProduct(self.base.refine(rank), assignment, self.fiber_maps)

    def _require_padic(self, what: str) -> None:
        if not self.is_padic:
            raise DomainError(
                f"{what} needs p-adic fiber maps; approximate interval exchanges first"
            )

    def fiber_table(
        self, base_rank: Optional[int] = None, fiber_rank: Optional[int] = None
    ) -> np.ndarray:
        """Return the ``(p^base_rank, p^fiber_rank)`` table of fiber permutations."""
        self._require_padic("fiber_table")
        base_rank = self.base_rank if base_rank is None else base_rank
        fiber_rank = self.fiber_rank if fiber_rank is None else fiber_rank
        width = self.p ** _check(self.base_rank, base_rank)
        _check(self.fiber_rank, fiber_rank)
        check_rank(self.p, fiber_rank, "fiber rank")
        rows = np.stack([f.refine(fiber_rank).array for f in self.fiber_maps])
        return rows[np.repeat(np.asarray(self.assignment, dtype=np.int64), width)]

    def cell_map(self, rank: int) -> np.ndarray:
        """The permutation of rank-``rank`` squares induced by ``T``.

        Square ``(i, j)`` has flat index ``i * p^rank + j``.
        """
        check_rank(self.p, rank)
        table = self.fiber_table(rank, rank)
        base = self.base.refine(rank).array
        return (base[:, None] * table.shape[1] + table).ravel()

    def is_identity(self) -> bool:
        return self.has_identity_base and all(
            _same_fiber(f, PAdicPermutation.identity(self.p)) for f in self.fiber_maps
        )

    # -- group operations ---------------------------------------------------

    def _tables_with(self, other: SkewProduct) -> tuple[np.ndarray, np.ndarray, int]:
        same_base(self.p, other.p)
        self._require_padic("composition")
        other._require_padic("composition")
        base_rank = max(self.base_rank, other.base_rank)
        fiber_rank = max(self.fiber_rank, other.fiber_rank)
        return (
            self.fiber_table(base_rank, fiber_rank),
            other.fiber_table(base_rank, fiber_rank),
            base_rank,
        )

    def compose(self, other: SkewProduct) -> SkewProduct:
        """Return ``self ∘ other`` (apply ``other`` first)."""
        outer, inner, base_rank = self._tables_with(other)
        inner_base = other.base.refine(base_rank).array
        table = np.take_along_axis(outer[inner_base], inner, axis=1)
        return SkewProduct.from_fiber_table(
            self.base.refine(base_rank).compose(other.base.refine(base_rank)), table
        )

    def inverse(self) -> SkewProduct:
        """Return ``T^-1``, whose fiber over ``u`` is ``(T_{T0^-1 u})^-1``."""
        self._require_padic("inverse")
        base_inverse = self.base.inverse()
        table = np.argsort(self.fiber_table()[base_inverse.array], axis=1)
        return SkewProduct.from_fiber_table(base_inverse, table)

    def power(self, n: int) -> SkewProduct:
        """Return ``T^n`` for any integer ``n``.

        For ``n > 0`` the fiber over ``x`` is the cocycle
        ``T_{T0^{n-1} x} ∘ ... ∘ T_x``.
        """
        self._require_padic("power")
        if n == 0:
            return SkewProduct.identity(self.p)
        if n < 0:
            return self.inverse().power(-n)
        if n > COCYCLE_STEPS:
            half = self.power(n // 2)
            squared = half.compose(half)
            return squared.compose(self) if n % 2 else squared
        table = self.fiber_table()
        base = self.base.array
        cocycle = np.broadcast_to(np.arange(table.shape[1]), table.shape).copy()
        position = np.arange(table.shape[0])
        for _ in range(n):
            cocycle = np.take_along_axis(table[position], cocycle, axis=1)
            position = base[position]
        return SkewProduct.from_fiber_table(self.base.power(n), cocycle)

    def iter_powers(self, n_max: int) -> Iterator[tuple[int, SkewProduct]]:
        """Yield ``(n, T^n)`` for ``n = 1 .. n_max``."""
        self._require_padic("iter_powers")
        current = self
        for n in range(1, n_max + 1):
            yield n, current
            current = self.compose(current)

    def apply_point(self, z: PointZ) -> PointZ:
        """Return ``(T0 x, T_x y)``.

        Raises:
            BoundaryError: If ``x`` or ``y`` lies on a cell boundary.
        """
        fiber = self.fiber_at_point(z.x)
        return PointZ(self.base.apply_point(z.x), fiber.apply_point(z.y))

    # -- equality and serialization ----------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SkewProduct):
            return NotImplemented
        if self.p != other.p or self.base != other.base:
            return False
        rank = max(self.base_rank, other.base_rank)
        return all(_same_fiber(a, b) for a, b in zip(self.cells_at(rank), other.cells_at(rank)))

    __hash__ = None  # type: ignore[assignment]

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "base": {"rank": self.base_rank, "perm": list(self.base.mapping)},
            "fibers": {
                "rank": self.fiber_rank,
                "assignment": list(self.assignment),
                "maps": [
                    list(f.mapping) if isinstance(f, PAdicPermutation) else f.to_dict()
                    for f in self.fiber_maps
                ],
            },
        }

    def __repr__(self) -> str:
        return (
            f"SkewProduct(p={self.p}, base={list(self.base.mapping)}, "
            f"assignment={list(self.assignment)}, n_maps={self.n_cells})"
        )


def _check(rank: int, new_rank: int) -> int:
    if new_rank < rank:
        raise RankError(f"Cannot refine rank {rank} down to rank {new_rank}")
    return new_rank - rank


def conjugate(s: SkewProduct, t: SkewProduct, verify: bool = True) -> SkewProduct:
    """Return ``S^-1 T S`` for an identity-base ``S``.

    Fiberwise ``(S^-1 T S)_x = (S_{T0 x})^-1 ∘ T_x ∘ S_x`` over the same base
    ``T0``.

    Args:
        s: Conjugator with identity base.
        t: The skew product to conjugate.
        verify: Also compute ``S^-1 ∘ (T ∘ S)`` and check both agree.

    Raises:
        DomainError: If ``s`` does not have the identity as its base.
        VerificationError: If the fiberwise law and the composition disagree.
    """
    if not s.has_identity_base:
        raise DomainError("The conjugator must have the identity as its base map")
    t_table, s_table, base_rank = t._tables_with(s)
    base = t.base.refine(base_rank).array
    s_inverse = np.argsort(s_table, axis=1)
    inner = np.take_along_axis(t_table, s_table, axis=1)
    table = np.take_along_axis(s_inverse[base], inner, axis=1)
    result = SkewProduct.from_fiber_table(t.base.refine(base_rank), table)
    if verify:
        slow = compose_all([s.inverse(), t, s])
        if slow != result:
            raise VerificationError("Fiberwise conjugation disagrees with S^-1 ∘ T ∘ S")
    return result


def koopman_pullback(t: SkewProduct, f: StepFunctionZ) -> StepFunctionZ:
    """Return ``f ∘ T^-1``, so that ``T χ_E = χ_{TE}``."""
    same_base(t.p, f.p)
    rank = max(f.rank, t.max_rank)
    values = f.refine(rank).values
    out = np.empty(values.size, dtype=object)
    out[t.cell_map(rank)] = values.ravel()
    return StepFunctionZ(t.p, rank, out.reshape(values.shape))


def compose_all(maps: Sequence[SkewProduct]) -> SkewProduct:
    """Compose ``maps[0] ∘ maps[1] ∘ ...``."""
    if not maps:
        raise DomainError("compose_all needs at least one map")
    result = maps[-1]
    for t in reversed(maps[:-1]):
        result = t.compose(result)
    return result

