"""
The ``rigidify`` command: replace the fibers of ``S`` by p-adic approximations.
"""

from __future__ import annotations

from fractions import Fraction

from padicskew.constructions.approximation import periodic_rigidify
from padicskew.constructions.sampler import sample_periodic_rotation_skew
from padicskew.experiments.base import Experiment, ExperimentResult, Table
from padicskew.utils.rational import format_rational
from padicskew.utils.serialization import read_skew

DEFAULT_EPS = Fraction(1, 4)
DEFAULT_LABELS = 2


class RigidifyExperiment(Experiment):
    """Emit ``Q``, its exact weak distance to ``S`` and the verified period.

    Without input a seeded rotation-fibered ``S`` over ``swap(p)`` is sampled.
    """

    NAME = "rigidify"

    def run(self) -> ExperimentResult:
        if self.config.input is None:
            s = sample_periodic_rotation_skew(self.config.p, DEFAULT_LABELS, self.config.seed)
        else:
            s = read_skew(self.config.input)
        eps = self.config.eps if self.config.eps is not None else DEFAULT_EPS
        result = periodic_rigidify(s.base, s, eps, self.config.rank)
        payload = {"Q": result.skew.to_dict(), "eps": format_rational(eps), **result.to_dict()}
        table = Table(
            ["weak_distance", "M", "period", "rank"],
            [[result.weak_distance, result.max_rank, result.period, result.reference_rank]],
            {"eps": format_rational(eps)},
        )
        return ExperimentResult(
            payload=payload,
            tables=[table],
            summary=(
                f"rigidify: M={result.max_rank}, Q^{result.period} = identity, "
                f"weak distance {format_rational(result.weak_distance)}"
            ),
        )
