"""
The ``build-conjugator`` command: tower, refinement, conjugator and certificate.
"""

from __future__ import annotations

import logging
from typing import Optional

from padicskew.constructions.conjugator import build_conjugator
from padicskew.constructions.sampler import sample_conjugator_pair
from padicskew.dynamics.skew import SkewProduct
from padicskew.errors import ConfigError
from padicskew.experiments.base import Experiment, ExperimentResult, Table
from padicskew.utils.rational import format_rational
from padicskew.utils.serialization import skew_from_dict

logger = logging.getLogger(__name__)

DEFAULT_DEPTH = 3
DEFAULT_LABELS = 2


class BuildConjugatorExperiment(Experiment):
    """Build ``S`` with ``S^-1 T̂ S`` close to ``T`` and emit its certificate.

    The input is ``{"target": skew, "hat": skew, "height": n}`` with an
    optional height. Without input a seeded pair over ``odometer(p, rank)``
    is sampled.
    """

    NAME = "build-conjugator"

    def pair(self) -> tuple[SkewProduct, SkewProduct, Optional[int]]:
        data = self.load_input()
        if data is None:
            cfg = self.config
            target, hat = sample_conjugator_pair(
                cfg.rank or DEFAULT_DEPTH, DEFAULT_LABELS, cfg.seed, cfg.p
            )
            return target, hat, None
        if not isinstance(data, dict) or "target" not in data or "hat" not in data:
            raise ConfigError("Field 'input': expected an object with 'target' and 'hat'")
        height = data.get("height")
        if height is not None and (isinstance(height, bool) or not isinstance(height, int)):
            raise ConfigError(f"Field 'height': expected an integer, got {height!r}")
        target = skew_from_dict(data["target"], "target")
        return target, skew_from_dict(data["hat"], "hat"), height

    def run(self) -> ExperimentResult:
        target, hat, height = self.pair()
        eps = self.config.eps
        s, rt, certificate = build_conjugator(target, hat, height, eps)
        payload = {
            "S": s.to_dict(),
            "tower": rt.tower.to_dict(),
            "certificate": certificate.to_dict(),
        }
        if eps is not None:
            payload["eps"] = format_rational(eps)
        logger.info(
            "Conjugator over a tower of height %d: weak distance %s, bound %s",
            rt.height,
            certificate.weak_distance,
            certificate.bound,
        )
        table = Table(
            ["levels_verified", "bound", "weak_distance"],
            [[certificate.levels_verified, certificate.bound, certificate.weak_distance]],
            {"height": rt.height, "rank": certificate.rank},
        )
        return ExperimentResult(
            payload=payload,
            tables=[table],
            summary=(
                f"build-conjugator: {certificate.levels_verified} levels verified, "
                f"weak distance {format_rational(certificate.weak_distance)}"
            ),
        )
