"""
The ``category-sweep`` command.

Every sample of a corpus is swept over ``k = 1 .. k_max``: each row records
``T ∈ P'_k``, ``T ∈ M'_k`` and ``μ(T^k A ∩ A)``, and is checked against the
exclusion ``P'_k ∩ M'_k = ∅`` together with the inequality chain behind it.
Samples are independent, so with ``jobs > 1`` they are evaluated in a
process pool; results are collected in corpus order.
"""

from __future__ import annotations

import logging
from multiprocessing import Pool
from typing import Any, Optional

from padicskew.constructions.sampler import sample_corpus
from padicskew.dynamics.skew import SkewProduct
from padicskew.errors import ConfigError
from padicskew.experiments.base import Experiment, ExperimentResult, Table
from padicskew.relative.category import (
    MIXING_RADIUS_SQ,
    QUARTER,
    CategoryRow,
    ExclusionChain,
    category_row_from_power,
)
from padicskew.utils.serialization import skew_from_dict

logger = logging.getLogger(__name__)

COLUMNS = ["sample", "k", "in_P", "in_M", "mu_TkA_capA", "defect_sq"]
DEFAULT_MAX_RANK = 3


def sweep_sample(item: tuple[int, dict, int]) -> tuple[int, list[CategoryRow]]:
    """Rows of one sample; takes plain data so it can run in a worker process."""
    index, data, k_max = item
    t = skew_from_dict(data, f"corpus[{index}]")
    return index, [category_row_from_power(power, k) for k, power in t.iter_powers(k_max)]


def row_is_consistent(row: CategoryRow) -> bool:
    """Exclusion and the chain ``(μ − 1/4)² <= defect²``, strict above 1/25 on ``P'_k``."""
    chain = ExclusionChain((row.mu_TkA_capA - QUARTER) ** 2, row.defect_sq)
    if row.violates_exclusion or not chain.holds:
        return False
    return not row.in_P or chain.lower_sq > MIXING_RADIUS_SQ


class CategorySweepExperiment(Experiment):
    """Sweep the category predicates over a corpus of skew products."""

    NAME = "category-sweep"

    def corpus(self) -> list[SkewProduct]:
        """Transformations from ``{"corpus": [...]}``, or a seeded sample."""
        data = self.load_input()
        if data is None:
            cfg = self.config
            return sample_corpus(cfg.seed, cfg.samples, cfg.p, cfg.rank or DEFAULT_MAX_RANK)
        items = data.get("corpus") if isinstance(data, dict) else data
        if not isinstance(items, list):
            raise ConfigError("Field 'corpus': expected a list of skew products")
        return [skew_from_dict(item, f"corpus[{i}]") for i, item in enumerate(items)]

    def run(self) -> ExperimentResult:
        corpus = self.corpus()
        items = [(i, t.to_dict(), self.config.k_max) for i, t in enumerate(corpus)]
        if self.config.jobs > 1 and len(items) > 1:
            with Pool(processes=self.config.jobs) as pool:
                results = pool.map(sweep_sample, items)
        else:
            results = [sweep_sample(item) for item in items]

        rows: list[dict] = []
        table_rows: list[list[Any]] = []
        counterexample: Optional[dict] = None
        for index, sample_rows in sorted(results, key=lambda r: r[0]):
            for row in sample_rows:
                rows.append({"sample": index, **row.to_dict()})
                table_rows.append(
                    [index, row.k, row.in_P, row.in_M, row.mu_TkA_capA, row.defect_sq]
                )
                if counterexample is None and not row_is_consistent(row):
                    counterexample = {
                        "sample": index,
                        "transformation": items[index][1],
                        "row": row.to_dict(),
                    }

        summary = {
            "samples": len(corpus),
            "rows": len(rows),
            "in_P": sum(r["in_P"] for r in rows),
            "in_M": sum(r["in_M"] for r in rows),
            "violations": sum(r["in_P"] and r["in_M"] for r in rows),
        }
        payload: dict = {"summary": summary, "rows": rows}
        exit_code = 0
        if counterexample is not None:
            payload["counterexample"] = counterexample
            exit_code = 2
            logger.error("Exclusion falsified at sample %d", counterexample["sample"])
        return ExperimentResult(
            payload=payload,
            tables=[Table(COLUMNS, table_rows, dict(summary))],
            exit_code=exit_code,
            summary=(
                f"category-sweep: {summary['samples']} samples, {summary['rows']} rows, "
                f"{summary['violations']} violations"
            ),
        )
