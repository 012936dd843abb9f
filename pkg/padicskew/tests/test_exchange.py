"""Tests for interval exchanges and interval-union arithmetic."""

from __future__ import annotations

from fractions import Fraction as F

import pytest

from padicskew.errors import BoundaryError, DomainError
from padicskew.models.exchange import (
    IntervalExchange,
    intersection_measure,
    merge_intervals,
    symdiff_intervals,
)
from padicskew.models.padic import PAdicPermutation


class TestIntervalArithmetic:
    def test_merge_touching(self) -> None:
        merged = merge_intervals([(F(1, 2), F(3, 4)), (F(0), F(1, 4)), (F(1, 4), F(1, 2))])
        assert merged == [(F(0), F(3, 4))]

    def test_intersection_and_symdiff(self) -> None:
        a = [(F(0), F(1, 2))]
        b = [(F(1, 4), F(3, 4))]
        assert intersection_measure(a, b) == F(1, 4)
        assert symdiff_intervals(a, b) == F(1, 2)


class TestRotation:
    def test_pieces_and_points(self) -> None:
        r = IntervalExchange.rotation(F(1, 3))
        assert r.breakpoints == [F(2, 3)]
        assert r.apply_point(F(1, 2)) == F(5, 6)
        assert r.apply_point(F(5, 6)) == F(1, 6)
        assert r.rotation_amount == F(1, 3)

    def test_breakpoint_rejected(self) -> None:
        with pytest.raises(BoundaryError, match="breakpoint"):
            IntervalExchange.rotation(F(1, 3)).apply_point(F(2, 3))

    def test_integer_rotation_is_identity(self) -> None:
        assert IntervalExchange.rotation(1) == IntervalExchange.identity()
        assert IntervalExchange.rotation(F(4, 3)) == IntervalExchange.rotation(F(1, 3))

    def test_inverse(self) -> None:
        assert IntervalExchange.rotation(F(1, 3)).inverse() == IntervalExchange.rotation(F(2, 3))

    def test_image_intervals(self) -> None:
        r = IntervalExchange.rotation(F(1, 3))
        assert r.image_intervals(F(1, 2), F(1)) == [(F(0), F(1, 3)), (F(5, 6), F(1))]

    def test_to_dict(self) -> None:
        assert IntervalExchange.rotation(F(1, 3)).to_dict() == {"rotation": "1/3"}


class TestGeneralExchange:
    def test_three_pieces(self) -> None:
        ex = IntervalExchange.from_pieces(
            [(F(0), F(1, 3), F(2, 3)), (F(1, 3), F(2, 3), F(0)), (F(2, 3), F(1), F(-2, 3))]
        )
        assert ex.rotation_amount is None
        assert ex.to_dict() == {
            "pieces": [["0/1", "1/3", "2/3"], ["1/3", "2/3", "0/1"], ["2/3", "1/1", "-2/3"]]
        }

    def test_adjacent_equal_shifts_merge(self) -> None:
        ex = IntervalExchange.from_pieces([(F(0), F(1, 4), F(0)), (F(1, 4), F(1), F(0))])
        assert len(ex.pieces) == 1

    def test_images_must_tile(self) -> None:
        with pytest.raises(DomainError, match="do not tile"):
            IntervalExchange.from_pieces([(F(0), F(1, 2), F(1, 4)), (F(1, 2), F(1), F(-1, 2))])

    def test_pieces_must_cover(self) -> None:
        with pytest.raises(DomainError, match="cover"):
            IntervalExchange.from_pieces([(F(0), F(1, 2), F(0))])


class TestPermutationBridge:
    def test_from_permutation(self) -> None:
        swap = PAdicPermutation(2, 1, (1, 0))
        ex = IntervalExchange.from_permutation(swap)
        assert ex.rotation_amount == F(1, 2)
        assert ex.as_permutation(2) == swap
        assert swap.to_exchange() == ex

    def test_dyadic_rotation_is_padic(self) -> None:
        perm = IntervalExchange.rotation(F(1, 4)).as_permutation(2)
        assert perm is not None
        assert perm.mapping == (1, 2, 3, 0)

    def test_third_rotation_is_not_dyadic(self) -> None:
        assert IntervalExchange.rotation(F(1, 3)).as_permutation(2) is None
        assert IntervalExchange.rotation(F(1, 3)).as_permutation(3) == PAdicPermutation(
            3, 1, (1, 2, 0)
        )
