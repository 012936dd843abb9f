"""
The ``defect-scan`` command: mixing and rigidity defects for ``n = 1 .. N_max``.

The input is either a bare skew product, scanned with ``f = g = χ_A`` for the
half-fiber set ``A = X × [0, 1/2)``, or ``{"transformation": ..., "f": ...,
"g": ...}``.
"""

from __future__ import annotations

import logging
from typing import Any

from padicskew.dynamics.skew import SkewProduct
from padicskew.errors import ConfigError
from padicskew.experiments.base import Experiment, ExperimentResult, Table
from padicskew.models.stepfn import StepFunctionZ
from padicskew.relative.conditional import DefectKind, scan_both
from padicskew.utils.serialization import function_from_spec, skew_from_dict

logger = logging.getLogger(__name__)


def parse_scan_input(data: Any) -> tuple[SkewProduct, StepFunctionZ, StepFunctionZ]:
    """Split a defect-scan document into ``(T, f, g)``."""
    if not isinstance(data, dict):
        raise ConfigError("Field 'input': expected a JSON object")
    if "transformation" not in data:
        t = skew_from_dict(data)
        f = function_from_spec(t.p, "half_fiber", "f")
        return t, f, f
    t = skew_from_dict(data["transformation"])
    f = function_from_spec(t.p, data.get("f", "half_fiber"), "f")
    g = function_from_spec(t.p, data["g"], "g") if "g" in data else f
    return t, f, g


class DefectScanExperiment(Experiment):
    """Emit the mixing and rigidity :class:`DefectReport` of one skew product."""

    NAME = "defect-scan"
    REQUIRES_INPUT = True

    def run(self) -> ExperimentResult:
        t, f, g = parse_scan_input(self.load_input())
        reports = scan_both(t, f, g, self.config.n_max)
        tables = [
            Table(
                ["n", "defect_sq"],
                [[n, defect] for n, defect in reports[kind].entries],
                {"kind": str(kind)},
            )
            for kind in DefectKind
        ]
        rigid = reports[DefectKind.RIGIDITY].rigidity_times()
        logger.info("Defect scan up to n=%d; exact rigidity times %s", self.config.n_max, rigid)
        return ExperimentResult(
            payload={"reports": [reports[kind].to_dict() for kind in DefectKind]},
            tables=tables,
            summary=f"defect-scan: n=1..{self.config.n_max}, rigidity zeros at {rigid}",
        )
