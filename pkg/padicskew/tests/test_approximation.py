"""Tests for p-adic approximation and periodic rigidification."""

from __future__ import annotations

from fractions import Fraction as F

import pytest

from padicskew.config import override_config
from padicskew.constructions.approximation import (
    default_reference_rank,
    padic_approx,
    periodic_rigidify,
)
from padicskew.dynamics.base_maps import odometer, swap
from padicskew.dynamics.skew import SkewProduct
from padicskew.errors import DomainError, ResolutionError, VerificationError
from padicskew.models.exchange import IntervalExchange
from padicskew.models.padic import PAdicPermutation


def rotation_skew(alpha: F) -> SkewProduct:
    return SkewProduct(swap(), (0, 0), (IntervalExchange.rotation(alpha),))


THIRDS_SWAP = IntervalExchange.from_pieces(
    [(F(0), F(1, 3), F(1, 3)), (F(1, 3), F(2, 3), F(-1, 3)), (F(2, 3), F(1), F(0))]
)


class TestReferenceRank:
    @pytest.mark.parametrize("eps, rank", [(F(1, 4), 3), (F(1, 100), 7), (F(1), 1)])
    def test_reference_rank(self, eps: F, rank: int) -> None:
        assert default_reference_rank(2, eps) == rank


class TestPadicApprox:
    def test_rotation_third(self) -> None:
        approx = padic_approx(IntervalExchange.rotation(F(1, 3)), F(1, 4), 2)
        assert approx.permutation == PAdicPermutation.translation(2, 3, 3)
        assert approx.discrepancy == F(1, 12)
        assert approx.reference_rank == 3

    def test_finer_accuracy(self) -> None:
        approx = padic_approx(IntervalExchange.rotation(F(1, 3)), F(1, 100), 2)
        assert approx.rank == 7
        assert approx.permutation == PAdicPermutation.translation(2, 7, 43)
        assert approx.discrepancy < F(1, 100)

    def test_explicit_reference_rank(self) -> None:
        approx = padic_approx(IntervalExchange.rotation(F(1, 3)), F(1, 4), 2, rank=1)
        assert approx.permutation == PAdicPermutation.translation(2, 2, 1)
        assert approx.discrepancy == F(1, 6)

    def test_padic_exchange_is_exact(self) -> None:
        approx = padic_approx(IntervalExchange.rotation(F(1, 4)), F(1, 4), 2)
        assert approx.permutation == PAdicPermutation.translation(2, 2, 1)
        assert approx.discrepancy == 0

    def test_permutation_passes_through(self) -> None:
        perm = PAdicPermutation(2, 1, (1, 0))
        assert padic_approx(perm, F(1, 8), 2).permutation is perm

    def test_permutation_with_other_base(self) -> None:
        with pytest.raises(DomainError, match="expected p=2"):
            padic_approx(PAdicPermutation(3, 1, (1, 2, 0)), F(1, 4), 2)

    def test_cap_reports_required_rank(self) -> None:
        with override_config(max_cells=3):
            with pytest.raises(ResolutionError) as info:
                padic_approx(IntervalExchange.rotation(F(1, 3)), F(1, 4), 2, rank=1)
        assert info.value.required_rank == 2

    def test_eps_must_be_positive(self) -> None:
        with pytest.raises(DomainError, match="positive"):
            padic_approx(IntervalExchange.rotation(F(1, 3)), 0, 2)


class TestPeriodicRigidify:
    def test_rotation_fiber(self) -> None:
        result = periodic_rigidify(swap(), rotation_skew(F(1, 3)), F(1, 4))
        expected = SkewProduct(swap(), (0, 0), (PAdicPermutation.translation(2, 3, 3),))
        assert result.skew == expected
        assert result.weak_distance == F(1, 96)
        assert result.max_rank == 3
        assert result.period == 16
        assert result.reference_rank == 3
        assert result.skew.power(16).is_identity()

    def test_to_dict(self) -> None:
        result = periodic_rigidify(swap(), rotation_skew(F(1, 3)), F(1, 4))
        assert result.to_dict() == {"weak_distance": "1/96", "M": 3, "period": 16, "rank": 3}

    def test_already_periodic(self) -> None:
        s = SkewProduct.lift(swap())
        result = periodic_rigidify(swap(), s, F(1, 4))
        assert result.skew == s
        assert result.weak_distance == 0
        assert result.max_rank == 0
        assert result.period == 2

    def test_base_period_must_be_p(self) -> None:
        s = SkewProduct.lift(odometer(2, 2))
        with pytest.raises(DomainError, match="period"):
            periodic_rigidify(odometer(2, 2), s, F(1, 4))

    def test_base_must_match(self) -> None:
        other = PAdicPermutation(2, 2, (1, 0, 3, 2))
        with pytest.raises(DomainError, match="not the base map"):
            periodic_rigidify(other, rotation_skew(F(1, 3)), F(1, 4))

    def test_non_rotation_exchange_is_not_periodic(self) -> None:
        s = SkewProduct(swap(), (0, 0), (THIRDS_SWAP,))
        with pytest.raises(VerificationError, match="is not the identity"):
            periodic_rigidify(swap(), s, F(1, 4))

    def test_exchange_equal_to_padic_fiber_counts_once(self) -> None:
        s = SkewProduct(
            swap(), (0, 1), (IntervalExchange.rotation(F(1, 2)), PAdicPermutation(2, 1, (1, 0)))
        )
        assert s.n_cells == 1
        result = periodic_rigidify(swap(), s, F(1, 4))
        assert result.weak_distance == 0
        assert result.period == 4
