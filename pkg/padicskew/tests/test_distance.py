"""Tests for symmetric-difference measures and the weak distance."""

from __future__ import annotations

from fractions import Fraction as F

import pytest

from padicskew.dynamics.base_maps import swap
from padicskew.dynamics.skew import SkewProduct
from padicskew.errors import DomainError, SpaceMismatchError
from padicskew.models.distance import symdiff_measure, weak_distance
from padicskew.models.exchange import IntervalExchange
from padicskew.models.padic import PAdicPermutation, PAdicSet


class TestSymdiffMeasure:
    def test_measure(self) -> None:
        a = PAdicSet(2, 1, (0,))
        b = PAdicSet(2, 2, (1, 2))
        assert symdiff_measure(a, b) == F(1, 2)
        assert symdiff_measure(a, a) == 0


class TestIntervalDistance:
    def test_swap_against_identity(self) -> None:
        identity = PAdicPermutation.identity(2)
        assert weak_distance(swap(), identity, 1) == 1
        assert weak_distance(swap(), identity, 0) == 0

    def test_exchange_against_permutation(self) -> None:
        rotation = IntervalExchange.rotation(F(1, 4))
        assert weak_distance(rotation, PAdicPermutation.translation(2, 2, 1), 2) == 0

    def test_third_rotation_against_identity(self) -> None:
        rotation = IntervalExchange.rotation(F(1, 3))
        # [0, 1/2) lands on [1/3, 5/6)
        assert weak_distance(rotation, IntervalExchange.identity(), 1, p=2) == F(2, 3)

    def test_two_exchanges_need_p(self) -> None:
        with pytest.raises(DomainError, match="p is required"):
            weak_distance(IntervalExchange.identity(), IntervalExchange.identity(), 1)


class TestSquareDistance:
    def test_fiber_swap(self) -> None:
        t = SkewProduct.identity(2)
        s = SkewProduct.fiber_only(swap())
        assert weak_distance(t, s, 1) == F(1, 2)
        assert weak_distance(t, t, 3) == 0

    def test_exchange_fibers(self) -> None:
        half = SkewProduct.fiber_only(IntervalExchange.rotation(F(1, 2)), p=2)
        assert weak_distance(half, SkewProduct.fiber_only(swap()), 2) == 0
        third = SkewProduct.fiber_only(IntervalExchange.rotation(F(1, 3)), p=2)
        assert weak_distance(third, SkewProduct.identity(2), 1) == F(1, 3)

    def test_space_mismatch(self) -> None:
        with pytest.raises(SpaceMismatchError):
            weak_distance(SkewProduct.identity(2), swap(), 1)
