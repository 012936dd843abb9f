"""Tests for odometers and periodic base maps."""

from __future__ import annotations

import pytest

from padicskew.dynamics.base_maps import (
    check_period,
    digit_reversal,
    fixes_rank_intervals,
    odometer,
    rotation,
    swap,
)
from padicskew.errors import CapExceededError, DomainError, RankError
from padicskew.models.padic import PAdicPermutation


class TestOdometer:
    def test_depth_two(self) -> None:
        assert odometer(2, 2).mapping == (2, 3, 1, 0)

    def test_depth_three_cycle(self) -> None:
        assert odometer(2, 3).cycles() == [(0, 4, 2, 6, 1, 5, 3, 7)]

    def test_depth_one_is_swap(self) -> None:
        assert odometer(2, 1) == swap()

    def test_single_cycle_for_odd_p(self) -> None:
        t = odometer(3, 2)
        assert t.is_single_cycle()
        assert t.order == 9

    def test_powers_fix_coarse_intervals(self) -> None:
        t = odometer(2, 3)
        assert not fixes_rank_intervals(t, 1, 1)
        assert fixes_rank_intervals(t, 2, 1)
        assert fixes_rank_intervals(t, 4, 2)
        assert not fixes_rank_intervals(t, 2, 2)

    def test_invalid_depth(self) -> None:
        with pytest.raises(RankError):
            odometer(2, 0)
        with pytest.raises(CapExceededError):
            odometer(2, 13)

    def test_digit_reversal(self) -> None:
        assert digit_reversal(2, 3).tolist() == [0, 4, 2, 6, 1, 5, 3, 7]


class TestPeriodicMaps:
    def test_swap_and_rotation(self) -> None:
        assert swap().mapping == (1, 0)
        assert rotation(3, 1).mapping == (1, 2, 0)

    def test_period(self) -> None:
        assert swap(3).period == 3
        assert PAdicPermutation.identity(2).period == 2

    def test_check_period(self) -> None:
        check_period(swap(), 2)
        with pytest.raises(DomainError, match="period 4"):
            check_period(odometer(2, 2), 2)
