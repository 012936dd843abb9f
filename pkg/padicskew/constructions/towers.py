"""
Rokhlin towers over p-adic base maps and their refinement by a partition.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from padicskew.errors import DomainError, RankError, TowerError, VerificationError
from padicskew.models.padic import PAdicPermutation, PAdicSet

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RokhlinTower:
    """Disjoint levels ``B, T0 B, ..., T0^{n-1} B``.

    Attributes:
        base_map: The base permutation ``T0``.
        B: The tower base, at the rank of ``base_map``.
        height: Number of levels ``n``.
    """

    base_map: PAdicPermutation
    B: PAdicSet
    height: int

    def __post_init__(self) -> None:
        if self.height < 1:
            raise DomainError(f"Tower height must be at least 1, got {self.height}")
        if self.B.rank != self.base_map.rank:
            object.__setattr__(self, "B", self.B.refine(self.base_map.rank))
        seen = np.zeros(self.base_map.size, dtype=bool)
        for level in self.levels:
            cells = list(level.indices)
            if seen[cells].any():
                raise VerificationError("Tower levels are not pairwise disjoint")
            seen[cells] = True

    @cached_property
    def levels(self) -> list[PAdicSet]:
        """The sets ``T0^i B`` for ``i = 0 .. n-1``."""
        out = [self.B]
        for _ in range(self.height - 1):
            out.append(self.base_map.image(out[-1]))
        return out

    @property
    def rank(self) -> int:
        return self.base_map.rank

    @property
    def top(self) -> PAdicSet:
        return self.levels[-1]

    @property
    def residual(self) -> Fraction:
        """Measure left uncovered, ``1 - n · m(B)``."""
        return 1 - self.height * self.B.measure

    def to_dict(self) -> dict:
        from padicskew.utils.rational import format_rational

        return {
            "base": self.base_map.to_dict(),
            "B": list(self.B.indices),
            "height": self.height,
            "residual": format_rational(self.residual),
        }


def rokhlin_tower(base: PAdicPermutation, height: int) -> RokhlinTower:
    """Build a tower of the given height by taking every ``height``-th cycle position.

    Each cycle of length ``L`` contributes ``L // height`` columns, starting at
    its smallest interval. When ``height`` divides every cycle length the
    residual is 0.

    Raises:
        TowerError: If some cycle is shorter than ``height``.
    """
    if height < 1:
        raise DomainError(f"Tower height must be at least 1, got {height}")
    cycles = base.cycles()
    shortest = min(len(c) for c in cycles)
    if shortest < height:
        raise TowerError(
            f"Base map has a cycle of length {shortest}, shorter than the tower height {height}"
        )
    starts: list[int] = []
    for cycle in cycles:
        columns = len(cycle) // height
        starts.extend(cycle[c * height] for c in range(columns))
    tower = RokhlinTower(base, PAdicSet.of(base.p, base.rank, starts), height)
    if tower.residual:
        logger.warning("Tower of height %d leaves residual %s", height, tower.residual)
    else:
        logger.info("Built tower of height %d over rank %d", height, base.rank)
    return tower


@dataclass(frozen=True, eq=False)
class RefinedTower:
    """A tower whose base is split into pieces ``B_l`` that stay inside one
    partition cell on every level.

    Attributes:
        tower: The underlying tower.
        rank: Working rank ``W`` of pieces and partition.
        partition: Cell label of each rank-``W`` interval of X.
        columns: ``columns[l, i]`` is the rank-``W`` interval ``T0^i B_l``.
        labels: ``labels[l, i]`` is the partition cell ``α(l, i)``.
    """

    tower: RokhlinTower
    rank: int
    partition: tuple[int, ...]
    columns: np.ndarray
    labels: np.ndarray

    @property
    def pieces(self) -> list[int]:
        """The pieces ``B_l`` as rank-``W`` interval indices."""
        return [int(c) for c in self.columns[:, 0]]

    @property
    def height(self) -> int:
        return self.tower.height

    def to_dict(self) -> dict:
        return {
            "tower": self.tower.to_dict(),
            "rank": self.rank,
            "pieces": self.pieces,
            "labels": self.labels.tolist(),
        }


def _partition_rank(size: int, p: int) -> int:
    rank = 0
    while p**rank < size:
        rank += 1
    if p**rank != size:
        raise RankError(f"Partition has {size} labels, which is not a power of p={p}")
    return rank


def refine_tower(tower: RokhlinTower, partition: Sequence[int]) -> RefinedTower:
    """Refine a tower by a partition of X given as labels over rank-R intervals.

    Pieces are single intervals at the working rank ``max(R, tower rank)``,
    so every level of every piece lies inside one partition cell.
    """
    p = tower.base_map.p
    rank = max(_partition_rank(len(partition), p), tower.rank)
    width = p ** (rank - _partition_rank(len(partition), p))
    fine_partition = np.repeat(np.asarray(partition, dtype=np.int64), width)
    base = tower.base_map.refine(rank).array
    pieces = np.asarray(tower.B.refine(rank).indices, dtype=np.int64)

    columns = np.empty((pieces.size, tower.height), dtype=np.int64)
    current = pieces
    for i in range(tower.height):
        columns[:, i] = current
        current = base[current]
    labels = fine_partition[columns]

    level_sets = [PAdicSet.from_mask(p, rank, fine_partition == c) for c in np.unique(labels)]
    cell_of_label = dict(zip(np.unique(labels).tolist(), level_sets))
    for index, piece in enumerate(pieces):
        image = PAdicSet(p, rank, (int(piece),))
        for i in range(tower.height):
            if image.difference(cell_of_label[int(labels[index, i])]).measure:
                raise VerificationError(f"Level {i} of piece {index} leaves its partition cell")
            image = tower.base_map.image(image)
    columns.setflags(write=False)
    labels.setflags(write=False)
    return RefinedTower(tower, rank, tuple(int(c) for c in fine_partition), columns, labels)
