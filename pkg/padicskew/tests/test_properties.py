"""Property-based checks of the exact identities on random skew products."""

from __future__ import annotations

from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis.strategies import composite, integers, lists

from padicskew.constructions.approximation import periodic_rigidify
from padicskew.constructions.conjugator import build_conjugator
from padicskew.constructions.sampler import (
    sample_base,
    sample_conjugator_pair,
    sample_identity_base_skew,
    sample_periodic_rotation_skew,
    sample_skew,
)
from padicskew.dynamics.base_maps import odometer, swap
from padicskew.dynamics.skew import SkewProduct, conjugate, koopman_pullback
from padicskew.experiments.base import ExperimentConfig
from padicskew.experiments.category_sweep import row_is_consistent
from padicskew.models.distance import symdiff_measure, weak_distance
from padicskew.models.padic import PAdicPermutation, PAdicSet
from padicskew.models.stepfn import StepFunctionZ, half_fiber_indicator
from padicskew.relative.category import (
    cond_exp_bound_check,
    dense_family,
    in_U,
    sweep_categories,
    transport_check,
)
from padicskew.relative.conditional import (
    DefectKind,
    mixing_defect_sq,
    rigidity_defect_sq,
    scan_both,
)
from padicskew.runner import ExperimentRunner

SEEDS = integers(min_value=0, max_value=2**32 - 1)


@composite
def skew_products(draw, identity_base: bool = False) -> SkewProduct:
    base_rank = draw(integers(1, 2))
    fiber_rank = draw(integers(1, 2))
    n_labels = draw(integers(1, 3))
    seed = draw(SEEDS)
    if identity_base:
        return sample_identity_base_skew(2, base_rank, fiber_rank, n_labels, seed)
    return sample_skew(sample_base(2, base_rank, seed), fiber_rank, n_labels, seed)


@composite
def step_functions(draw) -> StepFunctionZ:
    values = draw(lists(integers(-3, 3), min_size=16, max_size=16))
    return StepFunctionZ(2, 2, np.array(values, dtype=object).reshape(4, 4))


@composite
def padic_sets(draw) -> PAdicSet:
    rank = draw(integers(0, 3))
    return PAdicSet.of(2, rank, draw(lists(integers(0, 2**rank - 1), max_size=8)))


@composite
def permutations(draw) -> PAdicPermutation:
    return sample_base(2, draw(integers(1, 2)), draw(SEEDS))


def cell_order(t: SkewProduct) -> int:
    rank = t.max_rank
    return PAdicPermutation.from_array(t.p, 2 * rank, t.cell_map(rank)).order


class TestGroupLaws:
    @settings(max_examples=25, deadline=None)
    @given(skew_products(), integers(0, 5), integers(0, 5))
    def test_powers_add(self, t: SkewProduct, m: int, n: int) -> None:
        assert t.power(m).compose(t.power(n)) == t.power(m + n)

    @settings(max_examples=25, deadline=None)
    @given(skew_products())
    def test_inverse(self, t: SkewProduct) -> None:
        assert t.compose(t.inverse()).is_identity()
        assert t.power(-2).compose(t.power(2)).is_identity()

    @settings(max_examples=25, deadline=None)
    @given(skew_products(), step_functions())
    def test_koopman_is_unitary(self, t: SkewProduct, f: StepFunctionZ) -> None:
        moved = koopman_pullback(t, f)
        assert moved.l2_norm_sq() == f.l2_norm_sq()
        assert moved.integral() == f.integral()

    @settings(max_examples=20, deadline=None)
    @given(skew_products(), skew_products(identity_base=True), integers(1, 6))
    def test_conjugation_commutes_with_powers(
        self, t: SkewProduct, s: SkewProduct, n: int
    ) -> None:
        assert conjugate(s, t).power(n) == conjugate(s, t.power(n))

    @settings(max_examples=100, deadline=None)
    @given(skew_products(), skew_products(identity_base=True))
    def test_conjugation_preserves_order(self, t: SkewProduct, s: SkewProduct) -> None:
        order = cell_order(t)
        assert t.power(order).is_identity()
        assert conjugate(s, t).power(order).is_identity()

    @settings(max_examples=25, deadline=None)
    @given(skew_products(), step_functions(), step_functions())
    def test_koopman_is_multiplicative(
        self, t: SkewProduct, f: StepFunctionZ, g: StepFunctionZ
    ) -> None:
        assert koopman_pullback(t, f * g) == koopman_pullback(t, f) * koopman_pullback(t, g)


class TestRefinement:
    @settings(max_examples=50, deadline=None)
    @given(permutations(), permutations(), integers(0, 1))
    def test_refine_respects_composition(
        self, a: PAdicPermutation, b: PAdicPermutation, extra: int
    ) -> None:
        rank = max(a.rank, b.rank) + extra
        composed = a.compose(b).refine(rank)
        assert composed.mapping == a.refine(rank).compose(b.refine(rank)).mapping
        assert a.inverse().refine(rank).mapping == a.refine(rank).inverse().mapping

    @settings(max_examples=50, deadline=None)
    @given(padic_sets(), padic_sets(), integers(0, 1))
    def test_refine_respects_set_operations(self, a: PAdicSet, b: PAdicSet, extra: int) -> None:
        rank = max(a.rank, b.rank) + extra
        left, right = a.refine(rank), b.refine(rank)
        assert a.union(b).refine(rank).indices == left.union(right).indices
        assert a.intersection(b).refine(rank).indices == left.intersection(right).indices
        assert a.refine(rank).measure == a.measure

    @settings(max_examples=100, deadline=None)
    @given(padic_sets(), padic_sets())
    def test_symdiff_measure(self, a: PAdicSet, b: PAdicSet) -> None:
        expected = a.measure + b.measure - 2 * a.intersection(b).measure
        assert symdiff_measure(a, b) == expected
        assert symdiff_measure(a, b) == symdiff_measure(b, a)


class TestIdentities:
    @settings(max_examples=50, deadline=None)
    @given(skew_products(), skew_products(identity_base=True), integers(0, 8))
    def test_transport(self, t: SkewProduct, s: SkewProduct, n: int) -> None:
        assert transport_check(t, s, half_fiber_indicator(2), n)

    @settings(max_examples=500, deadline=None)
    @given(step_functions(), step_functions())
    def test_cond_exp_bound(self, g: StepFunctionZ, h: StepFunctionZ) -> None:
        assert cond_exp_bound_check(g, h).holds

    @settings(max_examples=25, deadline=None)
    @given(skew_products())
    def test_exclusion_chain(self, t: SkewProduct) -> None:
        assert all(row_is_consistent(row) for row in sweep_categories(t, 8))

    @settings(max_examples=50, deadline=None)
    @given(skew_products())
    def test_rigid_times_keep_mixing_defect(self, t: SkewProduct) -> None:
        a = half_fiber_indicator(2)
        reports = scan_both(t, a, a, 8)
        mixing = dict(reports[DefectKind.MIXING].entries)
        for n in reports[DefectKind.RIGIDITY].rigidity_times():
            assert mixing[n] == F(1, 16)
        order = cell_order(t)
        assert rigidity_defect_sq(t, a, a, order) == 0
        assert mixing_defect_sq(t, a, a, order) == F(1, 16)

    @settings(max_examples=50, deadline=None)
    @given(skew_products(), integers(0, 3), integers(0, 3), integers(1, 6), integers(0, 6))
    def test_in_u_is_monotone_in_k(self, t: SkewProduct, i: int, j: int, k: int, n: int) -> None:
        family = dense_family(2, 1)
        if in_U(t, family, i, j, k + 1, n):
            assert in_U(t, family, i, j, k, n)

    @settings(max_examples=25, deadline=None)
    @given(skew_products(), skew_products())
    def test_weak_distance_symmetric(self, t: SkewProduct, s: SkewProduct) -> None:
        assert weak_distance(t, s, 2) == weak_distance(s, t, 2)
        assert weak_distance(t, t, 2) == 0

    @settings(max_examples=100, deadline=None)
    @given(skew_products(), skew_products(), skew_products())
    def test_weak_distance_triangle(self, t: SkewProduct, s: SkewProduct, r: SkewProduct) -> None:
        assert weak_distance(t, r, 2) <= weak_distance(t, s, 2) + weak_distance(s, r, 2)

    @settings(max_examples=20, deadline=None)
    @given(skew_products())
    def test_defects_are_bounded(self, t: SkewProduct) -> None:
        a = half_fiber_indicator(2)
        for report in scan_both(t, a, a, 4).values():
            assert all(0 <= value <= 1 for value in report.values())


@pytest.mark.slow
class TestAcceptanceScale:
    def test_category_sweep(self) -> None:
        config = ExperimentConfig("category-sweep", rank=3, k_max=32, samples=200, seed=0)
        result = ExperimentRunner(config)()
        assert result.exit_code == 0
        assert result.payload["summary"]["violations"] == 0
        assert result.payload["summary"]["rows"] == 200 * 32

    def test_lifted_base_scan(self) -> None:
        t = SkewProduct.lift(sample_base(2, 6, 0))
        a = half_fiber_indicator(2)
        reports = scan_both(t, a, a, 64)
        assert all(value == 0 for value in reports[DefectKind.RIGIDITY].values())

    @pytest.mark.parametrize("depth", [0, 1, 2, 3, 4, 5, 6])
    def test_lifted_mixing_defect(self, depth: int) -> None:
        base = swap() if depth == 0 else odometer(2, depth)
        t = SkewProduct.lift(base)
        a = half_fiber_indicator(2)
        reports = scan_both(t, a, a, 64)
        assert reports[DefectKind.MIXING].values() == [F(1, 16)] * 64

    @pytest.mark.parametrize("depth", [3, 4, 5])
    @pytest.mark.parametrize("height", [4, 8, 16])
    def test_conjugator_bound(self, depth: int, height: int) -> None:
        if height > 2**depth:
            pytest.skip("tower taller than the odometer cycle")
        for seed in range(20):
            target, hat = sample_conjugator_pair(depth, 2, seed)
            _, rt, certificate = build_conjugator(target, hat, height)
            assert rt.tower.residual == 0
            assert certificate.levels_verified == height - 1
            assert certificate.weak_distance <= F(1, height)

    @pytest.mark.parametrize("p", [2, 3])
    @pytest.mark.parametrize("eps", [F(1, 4), F(1, 16)])
    def test_rigidification(self, p: int, eps: F) -> None:
        for seed in range(20):
            s = sample_periodic_rotation_skew(p, 2, seed)
            result = periodic_rigidify(s.base, s, eps)
            assert result.skew.power(result.period).is_identity()
            assert result.weak_distance < eps / 2
