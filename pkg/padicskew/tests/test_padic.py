"""Tests for p-adic intervals, sets and permutations."""

from __future__ import annotations

from fractions import Fraction as F

import pytest

from padicskew.errors import (
    BaseMismatchError,
    BoundaryError,
    CapExceededError,
    DomainError,
    RankError,
)
from padicskew.models.padic import (
    PAdicInterval,
    PAdicPermutation,
    PAdicSet,
    cell_of,
    common_rank,
)


class TestPAdicInterval:
    def test_bounds_and_measure(self) -> None:
        interval = PAdicInterval(2, 3, 5)
        assert interval.bounds == (F(5, 8), F(6, 8))
        assert interval.measure == F(1, 8)

    def test_index_out_of_range(self) -> None:
        with pytest.raises(DomainError, match="out of range"):
            PAdicInterval(2, 1, 2)

    def test_invalid_base(self) -> None:
        with pytest.raises(BaseMismatchError):
            PAdicInterval(1, 1, 0)

    def test_to_set(self) -> None:
        assert PAdicInterval(3, 1, 2).to_set() == PAdicSet(3, 1, (2,))


class TestCellOf:
    def test_interior_point(self) -> None:
        assert cell_of(F(3, 8), 2, 2) == 1
        assert cell_of(F(1, 2), 3, 1) == 1

    def test_boundary_rejected(self) -> None:
        with pytest.raises(BoundaryError, match="boundary"):
            cell_of(F(1, 2), 2, 1)

    def test_outside_rejected(self) -> None:
        with pytest.raises(BoundaryError, match="outside"):
            cell_of(F(1), 2, 1)


class TestPAdicSet:
    def test_of_sorts_and_measures(self) -> None:
        s = PAdicSet.of(2, 2, [3, 0, 3])
        assert s.indices == (0, 3)
        assert s.measure == F(1, 2)

    def test_indices_must_increase(self) -> None:
        with pytest.raises(DomainError, match="strictly increasing"):
            PAdicSet(2, 2, (1, 0))

    def test_refine(self) -> None:
        assert PAdicSet(2, 1, (1,)).refine(2).indices == (2, 3)
        assert PAdicSet(3, 1, (0,)).refine(2).indices == (0, 1, 2)

    def test_refine_down_raises(self) -> None:
        with pytest.raises(RankError):
            PAdicSet(2, 2, (0,)).refine(1)

    def test_coarsen(self) -> None:
        c = PAdicSet(2, 2, (2, 3)).coarsen()
        assert (c.rank, c.indices) == (1, (1,))
        assert PAdicSet(2, 2, (1, 2)).coarsen().rank == 2

    def test_semantic_equality_across_ranks(self) -> None:
        a = PAdicSet(2, 1, (0,))
        b = PAdicSet(2, 3, (0, 1, 2, 3))
        assert a == b
        assert hash(a) == hash(b)
        assert PAdicSet.full(2, 3) == PAdicSet.full(2)
        assert PAdicSet(2, 1, (0,)) != PAdicSet(2, 1, (1,))

    def test_boolean_operations(self) -> None:
        a = PAdicSet(2, 1, (0,))
        b = PAdicSet(2, 2, (1, 2))
        assert a.union(b).indices == (0, 1, 2)
        assert a.intersection(b).indices == (1,)
        assert a.difference(b).indices == (0,)
        assert a.symmetric_difference(b).indices == (0, 2)
        assert not a.is_disjoint(b)
        assert a.is_disjoint(PAdicSet(2, 2, (2, 3)))

    def test_intervals_merge(self) -> None:
        assert PAdicSet(2, 3, (0, 1, 3)).intervals() == [(F(0), F(1, 4)), (F(3, 8), F(1, 2))]

    def test_mixed_bases(self) -> None:
        with pytest.raises(BaseMismatchError):
            PAdicSet(2, 1, (0,)).union(PAdicSet(3, 1, (0,)))

    def test_rank_cap(self) -> None:
        with pytest.raises(CapExceededError):
            PAdicSet(2, 13, ())


class TestPAdicPermutation:
    def test_must_be_bijection(self) -> None:
        with pytest.raises(DomainError, match="bijection"):
            PAdicPermutation(2, 1, (0, 0))
        with pytest.raises(DomainError, match="needs 4 entries"):
            PAdicPermutation(2, 2, (0, 1))

    def test_translation(self) -> None:
        assert PAdicPermutation.translation(2, 2, 1).mapping == (1, 2, 3, 0)

    def test_refine_carries_children_in_order(self) -> None:
        swap = PAdicPermutation(2, 1, (1, 0))
        assert swap.refine(2).mapping == (2, 3, 0, 1)

    def test_coarsen_and_equality(self) -> None:
        fine = PAdicPermutation(2, 2, (2, 3, 0, 1))
        assert fine.coarsen().mapping == (1, 0)
        assert fine == PAdicPermutation(2, 1, (1, 0))
        assert hash(fine) == hash(PAdicPermutation(2, 1, (1, 0)))
        assert PAdicPermutation.identity(2, 3) == PAdicPermutation.identity(2)

    def test_compose_applies_right_first(self) -> None:
        a = PAdicPermutation(2, 2, (1, 0, 2, 3))
        b = PAdicPermutation(2, 2, (0, 2, 1, 3))
        # b first: 1 -> 2, then a: 2 -> 2
        assert a.compose(b).mapping == (1, 2, 0, 3)

    def test_inverse_and_power(self) -> None:
        rot = PAdicPermutation.translation(2, 2, 1)
        assert rot.compose(rot.inverse()).is_identity()
        assert rot.power(2).mapping == (2, 3, 0, 1)
        assert rot.power(4).is_identity()
        assert rot.power(-1) == rot.inverse()
        assert rot.power(0).is_identity()

    def test_cycles_order_period(self) -> None:
        perm = PAdicPermutation(2, 2, (1, 0, 3, 2))
        assert perm.cycles() == [(0, 1), (2, 3)]
        assert perm.order == 2
        assert not perm.is_single_cycle()
        assert PAdicPermutation.identity(2, 1).period == 2
        assert PAdicPermutation.translation(3, 1, 1).period == 3

    def test_image_of_set(self) -> None:
        rot = PAdicPermutation.translation(2, 2, 1)
        assert rot.image(PAdicSet(2, 1, (0,))).indices == (1, 2)
        assert rot.image(PAdicSet(2, 1, (0,))).measure == F(1, 2)

    def test_apply_point(self) -> None:
        swap = PAdicPermutation(2, 1, (1, 0))
        assert swap.apply_point(F(1, 3)) == F(5, 6)
        with pytest.raises(BoundaryError):
            swap.apply_point(F(1, 2))

    def test_image_intervals(self) -> None:
        rot = PAdicPermutation.translation(2, 2, 1)
        assert rot.image_intervals(F(1, 8), F(3, 4)) == [(F(3, 8), F(1))]
        assert rot.image_intervals(F(3, 4), F(1)) == [(F(0), F(1, 4))]

    def test_to_dict(self) -> None:
        assert PAdicPermutation(2, 1, (1, 0)).to_dict() == {"p": 2, "rank": 1, "perm": [1, 0]}

    def test_common_rank(self) -> None:
        assert common_rank(PAdicSet(2, 1, ()), PAdicPermutation.identity(2, 3)) == 3
        with pytest.raises(BaseMismatchError):
            common_rank(PAdicSet(2, 1, ()), PAdicSet(3, 1, ()))
