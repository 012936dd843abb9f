"""
Experiment runner for padicskew.

The :class:`ExperimentRunner` resolves the command named in an
:class:`~padicskew.experiments.base.ExperimentConfig`, runs it and renders the
result as canonical JSON or as CSV blocks.
"""

from __future__ import annotations

import logging
from typing import Optional

from padicskew.experiments.base import Experiment, ExperimentConfig, ExperimentResult
from padicskew.experiments.registry import ExperimentRegistry
from padicskew.utils.serialization import dumps, format_csv, write_json, write_text

logger = logging.getLogger(__name__)


class ExperimentRunner:
    """Runs one experiment and emits its report.

    Usage::

        runner = ExperimentRunner(ExperimentConfig("defect-scan", input=Path("t.json")))
        result, text = runner.execute()

    Args:
        config: Validated runner settings.
    """

    def __init__(self, config: ExperimentConfig) -> None:
        self.config = config
        self._experiment: Experiment = ExperimentRegistry.get(config.command)(config)

    def __call__(self) -> ExperimentResult:
        logger.debug("Running %r", self._experiment)
        return self._experiment.run()

    def render(self, result: ExperimentResult) -> str:
        """Report text in the configured format.

        Raises:
            ValueError: If the format is unknown.
        """
        if self.config.format == "json":
            return dumps(result.payload) + "\n"
        if self.config.format == "csv":
            blocks = []
            for table in result.tables:
                columns, rows = table.rendered_rows(self.config.decimal)
                blocks.append(format_csv(columns, rows, table.metadata))
            return "\n".join(blocks)
        raise ValueError(f"Unknown format: {self.config.format}")

    def execute(self) -> tuple[ExperimentResult, Optional[str]]:
        """Run, render and write to ``config.out`` when set.

        Returns:
            The result and the report text, or ``None`` if it was written to a file.
        """
        result = self()
        if self.config.format == "json":
            text = write_json(result.payload, self.config.out)
        else:
            text = write_text(self.render(result), self.config.out)
        if self.config.out is not None:
            logger.info("Wrote %s report to %s", self.config.format, self.config.out)
            return result, None
        return result, text

    @property
    def experiment(self) -> str:
        return self._experiment.NAME

    def __repr__(self) -> str:
        return f"<ExperimentRunner(command={self.experiment}, format={self.config.format})>"
