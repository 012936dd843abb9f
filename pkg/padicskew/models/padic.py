"""
p-adic intervals, sets and permutations of the unit interval.

A rank-``k`` p-adic interval is the half-open interval ``[j/p^k, (j+1)/p^k)``.
A p-adic set is a finite union of such intervals, and a p-adic permutation
translates every rank-``k`` interval onto another one. Every object can be
refined to a higher rank without changing what it represents; equality and
hashing compare the coarsest representation, so refined copies compare equal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import TYPE_CHECKING, Iterable, Sequence

import numpy as np

from padicskew.config import check_rank
from padicskew.errors import BaseMismatchError, BoundaryError, DomainError, RankError

if TYPE_CHECKING:
    from padicskew.models.exchange import IntervalExchange

Interval = tuple[Fraction, Fraction]


def _check_base(p: int) -> None:
    if not isinstance(p, (int, np.integer)) or p < 2:
        raise BaseMismatchError(f"p must be an integer >= 2, got {p!r}")


def _check_refinement(rank: int, new_rank: int) -> int:
    if new_rank < rank:
        raise RankError(f"Cannot refine rank {rank} down to rank {new_rank}")
    return new_rank - rank


def same_base(*ps: int) -> int:
    """Return the common base of the arguments.

    Raises:
        BaseMismatchError: If the bases differ.
    """
    bases = set(ps)
    if len(bases) != 1:
        raise BaseMismatchError(f"Objects use different bases p: {sorted(bases)}")
    return bases.pop()


def cell_of(x: Fraction, p: int, rank: int) -> int:
    """Return the index of the rank-``rank`` interval containing ``x``.

    Raises:
        BoundaryError: If ``x`` is outside ``[0, 1)`` or on a cell boundary.
    """
    scaled = Fraction(x) * p**rank
    if not 0 <= scaled < p**rank:
        raise BoundaryError(f"Point {x} lies outside [0, 1)")
    if rank > 0 and scaled.denominator == 1:
        raise BoundaryError(f"Point {x} lies on a rank-{rank} cell boundary (p={p})")
    return math.floor(scaled)


@dataclass(frozen=True)
class PAdicInterval:
    """The interval ``[index/p^rank, (index+1)/p^rank)``.

    Attributes:
        p: Base of the p-adic grid.
        rank: Rank ``k >= 0``.
        index: Position ``0 <= index < p^rank``.
    """

    p: int
    rank: int
    index: int

    def __post_init__(self) -> None:
        _check_base(self.p)
        if self.rank < 0:
            raise RankError(f"Rank must be non-negative, got {self.rank}")
        if not 0 <= self.index < self.p**self.rank:
            raise DomainError(
                f"Interval index {self.index} out of range for rank {self.rank} (p={self.p})"
            )

    @property
    def bounds(self) -> Interval:
        """Return ``(start, end)`` as exact rationals."""
        size = Fraction(1, self.p**self.rank)
        return self.index * size, (self.index + 1) * size

    @property
    def measure(self) -> Fraction:
        return Fraction(1, self.p**self.rank)

    def to_set(self) -> PAdicSet:
        return PAdicSet(self.p, self.rank, (self.index,))


@dataclass(frozen=True, eq=False)
class PAdicSet:
    """A union of rank-``rank`` p-adic intervals.

    Attributes:
        p: Base of the p-adic grid.
        rank: Rank of the listed intervals.
        indices: Strictly increasing interval indices.
    """

    p: int
    rank: int
    indices: tuple[int, ...]

    def __post_init__(self) -> None:
        _check_base(self.p)
        if self.rank < 0:
            raise RankError(f"Rank must be non-negative, got {self.rank}")
        check_rank(self.p, self.rank)
        object.__setattr__(self, "indices", tuple(int(i) for i in self.indices))
        size = self.p**self.rank
        previous = -1
        for index in self.indices:
            if index <= previous:
                raise DomainError(
                    f"Set indices must be strictly increasing, got {list(self.indices)}"
                )
            previous = index
        if self.indices and self.indices[-1] >= size:
            raise DomainError(
                f"Interval index {self.indices[-1]} out of range for rank {self.rank} (p={self.p})"
            )

    @classmethod
    def of(cls, p: int, rank: int, indices: Iterable[int]) -> PAdicSet:
        """Build a set from indices in any order, dropping duplicates."""
        return cls(p, rank, tuple(sorted({int(i) for i in indices})))

    @classmethod
    def full(cls, p: int, rank: int = 0) -> PAdicSet:
        return cls(p, rank, tuple(range(p**rank)))

    @classmethod
    def empty(cls, p: int, rank: int = 0) -> PAdicSet:
        return cls(p, rank, ())

    @classmethod
    def from_mask(cls, p: int, rank: int, mask: np.ndarray) -> PAdicSet:
        return cls(p, rank, tuple(int(i) for i in np.flatnonzero(mask)))

    @property
    def measure(self) -> Fraction:
        return Fraction(len(self.indices), self.p**self.rank)

    def mask(self) -> np.ndarray:
        """Return a boolean array over the rank-``rank`` cells."""
        out = np.zeros(self.p**self.rank, dtype=bool)
        out[list(self.indices)] = True
        return out

    def refine(self, rank: int) -> PAdicSet:
        """Represent the same set with rank-``rank`` intervals."""
        depth = _check_refinement(self.rank, rank)
        check_rank(self.p, rank)
        if depth == 0:
            return self
        width = self.p**depth
        children = (np.asarray(self.indices, dtype=np.int64)[:, None] * width + np.arange(width))
        return PAdicSet(self.p, rank, tuple(int(i) for i in children.ravel()))

    def coarsen(self) -> PAdicSet:
        """Return the lowest-rank representation of the same set."""
        current = self
        while current.rank > 0:
            mask = current.mask().reshape(-1, current.p)
            if not np.all(mask.all(axis=1) | ~mask.any(axis=1)):
                break
            current = PAdicSet.from_mask(current.p, current.rank - 1, mask[:, 0])
        return current

    def intervals(self) -> list[Interval]:
        """Return the set as merged half-open intervals."""
        size = self.p**self.rank
        out: list[Interval] = []
        for index in self.indices:
            if out and out[-1][1] == Fraction(index, size):
                out[-1] = (out[-1][0], Fraction(index + 1, size))
            else:
                out.append((Fraction(index, size), Fraction(index + 1, size)))
        return out

    def _aligned(self, other: PAdicSet) -> tuple[np.ndarray, np.ndarray, int]:
        rank = common_rank(self, other)
        return self.refine(rank).mask(), other.refine(rank).mask(), rank

    def union(self, other: PAdicSet) -> PAdicSet:
        a, b, rank = self._aligned(other)
        return PAdicSet.from_mask(self.p, rank, a | b)

    def intersection(self, other: PAdicSet) -> PAdicSet:
        a, b, rank = self._aligned(other)
        return PAdicSet.from_mask(self.p, rank, a & b)

    def difference(self, other: PAdicSet) -> PAdicSet:
        a, b, rank = self._aligned(other)
        return PAdicSet.from_mask(self.p, rank, a & ~b)

    def symmetric_difference(self, other: PAdicSet) -> PAdicSet:
        a, b, rank = self._aligned(other)
        return PAdicSet.from_mask(self.p, rank, a ^ b)

    def is_disjoint(self, other: PAdicSet) -> bool:
        a, b, _ = self._aligned(other)
        return not np.any(a & b)

    def __contains__(self, index: int) -> bool:
        return index in set(self.indices)

    def __len__(self) -> int:
        return len(self.indices)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PAdicSet):
            return NotImplemented
        if self.p != other.p:
            return False
        a, b = self.coarsen(), other.coarsen()
        return a.rank == b.rank and a.indices == b.indices

    def __hash__(self) -> int:
        c = self.coarsen()
        return hash((c.p, c.rank, c.indices))

    def to_dict(self) -> dict:
        return {"p": self.p, "rank": self.rank, "indices": list(self.indices)}


@dataclass(frozen=True, eq=False)
class PAdicPermutation:
    """A measure-preserving interval permutation of ``[0, 1)``.

    Interval ``j`` of rank ``rank`` is translated onto interval ``mapping[j]``.

    Attributes:
        p: Base of the p-adic grid.
        rank: Rank ``k`` of the permuted intervals.
        mapping: A bijection of ``{0, ..., p^k - 1}``.
    """

    p: int
    rank: int
    mapping: tuple[int, ...]

    def __post_init__(self) -> None:
        _check_base(self.p)
        if self.rank < 0:
            raise RankError(f"Rank must be non-negative, got {self.rank}")
        check_rank(self.p, self.rank)
        object.__setattr__(self, "mapping", tuple(int(j) for j in self.mapping))
        size = self.p**self.rank
        if len(self.mapping) != size:
            raise DomainError(
                f"A rank-{self.rank} permutation (p={self.p}) needs {size} entries, "
                f"got {len(self.mapping)}"
            )
        if sorted(self.mapping) != list(range(size)):
            raise DomainError(f"Mapping is not a bijection of range({size})")

    @classmethod
    def from_array(cls, p: int, rank: int, mapping: Sequence[int] | np.ndarray) -> PAdicPermutation:
        return cls(p, rank, tuple(int(j) for j in mapping))

    @classmethod
    def identity(cls, p: int, rank: int = 0) -> PAdicPermutation:
        return cls(p, rank, tuple(range(p**rank)))

    @classmethod
    def translation(cls, p: int, rank: int, shift: int) -> PAdicPermutation:
        """Rotation of the circle ``[0, 1)`` by ``shift / p^rank``."""
        size = p**rank
        return cls(p, rank, tuple((j + shift) % size for j in range(size)))

    @cached_property
    def array(self) -> np.ndarray:
        """The mapping as a read-only integer array."""
        out = np.asarray(self.mapping, dtype=np.int64)
        out.setflags(write=False)
        return out

    @property
    def size(self) -> int:
        return self.p**self.rank

    def refine(self, rank: int) -> PAdicPermutation:
        """Represent the same point map at a higher rank.

        Each interval splits into ``p^(rank - self.rank)`` children, which are
        carried in order onto the children of the image interval.
        """
        depth = _check_refinement(self.rank, rank)
        check_rank(self.p, rank)
        if depth == 0:
            return self
        width = self.p**depth
        refined = self.array[:, None] * width + np.arange(width)
        return PAdicPermutation.from_array(self.p, rank, refined.ravel())

    def coarsen(self) -> PAdicPermutation:
        """Return the lowest-rank representation of the same point map."""
        current = self
        while current.rank > 0:
            blocks = current.array.reshape(-1, current.p)
            heads = blocks[:, 0]
            if heads.min() < 0 or np.any(heads % current.p) or not np.array_equal(
                blocks, heads[:, None] + np.arange(current.p)
            ):
                break
            current = PAdicPermutation.from_array(current.p, current.rank - 1, heads // current.p)
        return current

    def _aligned(self, other: PAdicPermutation) -> tuple[PAdicPermutation, PAdicPermutation]:
        rank = common_rank(self, other)
        return self.refine(rank), other.refine(rank)

    def compose(self, other: PAdicPermutation) -> PAdicPermutation:
        """Return ``self ∘ other`` (apply ``other`` first)."""
        a, b = self._aligned(other)
        return PAdicPermutation.from_array(a.p, a.rank, a.array[b.array])

    def inverse(self) -> PAdicPermutation:
        return PAdicPermutation.from_array(self.p, self.rank, np.argsort(self.array))

    def power(self, n: int) -> PAdicPermutation:
        """Return the ``n``-th iterate; negative ``n`` iterates the inverse."""
        base = self.array if n >= 0 else np.argsort(self.array)
        result = np.arange(self.size)
        n = abs(n)
        while n:
            if n & 1:
                result = base[result]
            base = base[base]
            n >>= 1
        return PAdicPermutation.from_array(self.p, self.rank, result)

    def cycles(self) -> list[tuple[int, ...]]:
        """Return the cycles, each starting at its smallest index."""
        seen = np.zeros(self.size, dtype=bool)
        out: list[tuple[int, ...]] = []
        for start in range(self.size):
            if seen[start]:
                continue
            cycle = []
            j = start
            while not seen[j]:
                seen[j] = True
                cycle.append(j)
                j = self.mapping[j]
            out.append(tuple(cycle))
        return out

    @property
    def order(self) -> int:
        """Smallest ``m >= 1`` with ``self^m`` the identity."""
        return math.lcm(*(len(c) for c in self.cycles()))

    @property
    def period(self) -> int:
        """Smallest ``m > 1`` with ``self^m`` the identity."""
        order = self.order
        return order if order > 1 else 2

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.array, np.arange(self.size)))

    def is_single_cycle(self) -> bool:
        return len(self.cycles()) == 1

    def image(self, s: PAdicSet) -> PAdicSet:
        """Return ``π(s)``, which has the same measure as ``s``."""
        rank = common_rank(self, s)
        perm, cells = self.refine(rank), s.refine(rank)
        return PAdicSet.of(self.p, rank, perm.array[list(cells.indices)])

    def apply_point(self, x: Fraction) -> Fraction:
        """Return the image of ``x``.

        Raises:
            BoundaryError: If ``x`` lies on a cell boundary.
        """
        j = cell_of(x, self.p, self.rank)
        return Fraction(x) + Fraction(self.mapping[j] - j, self.size)

    def image_intervals(self, start: Fraction, end: Fraction) -> list[Interval]:
        """Return the image of ``[start, end)`` as merged intervals."""
        from padicskew.models.exchange import merge_intervals

        size = self.size
        first = math.floor(Fraction(start) * size)
        last = math.ceil(Fraction(end) * size)
        pieces: list[Interval] = []
        for j in range(max(first, 0), min(last, size)):
            lo = max(Fraction(start), Fraction(j, size))
            hi = min(Fraction(end), Fraction(j + 1, size))
            if lo < hi:
                shift = Fraction(self.mapping[j] - j, size)
                pieces.append((lo + shift, hi + shift))
        return merge_intervals(pieces)

    def to_exchange(self) -> IntervalExchange:
        """Return the same map as an :class:`IntervalExchange`."""
        from padicskew.models.exchange import IntervalExchange

        return IntervalExchange.from_permutation(self)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PAdicPermutation):
            return NotImplemented
        if self.p != other.p:
            return False
        a, b = self.coarsen(), other.coarsen()
        return a.rank == b.rank and a.mapping == b.mapping

    def __hash__(self) -> int:
        c = self.coarsen()
        return hash((c.p, c.rank, c.mapping))

    def to_dict(self) -> dict:
        return {"p": self.p, "rank": self.rank, "perm": list(self.mapping)}


def common_rank(*objects: PAdicSet | PAdicPermutation) -> int:
    """Return the largest rank among ``objects`` after checking their bases agree."""
    same_base(*(o.p for o in objects))
    return max(o.rank for o in objects)
