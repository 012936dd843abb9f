"""
Base experiment interface for padicskew.

Every command of the runner implements the :class:`Experiment` abstract base
class. An experiment reads its inputs from an :class:`ExperimentConfig`, runs
the exact computation and returns an :class:`ExperimentResult` that the runner
renders as JSON or CSV.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

from padicskew.errors import ConfigError
from padicskew.utils.rational import format_decimal, format_rational
from padicskew.utils.serialization import read_json

FORMATS = ("json", "csv")


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated settings for one runner invocation.

    Attributes:
        command: Experiment name, e.g. ``defect-scan``.
        input: Optional JSON input document.
        p: Base for sampled corpora.
        rank: Rank bound for sampled corpora, or the reference rank.
        n_max: Horizon of defect scans.
        k_max: Horizon of category sweeps.
        eps: Target accuracy for conjugator and rigidifier builds.
        seed: Seed of every sampled corpus.
        samples: Number of sampled transformations.
        jobs: Worker processes for independent samples.
        out: Output path; ``None`` writes to stdout.
        format: ``json`` or ``csv``.
        decimal: Add a derived decimal column next to every rational in CSV.
    """

    command: str
    input: Optional[Path] = None
    p: int = 2
    rank: Optional[int] = None
    n_max: int = 8
    k_max: int = 8
    eps: Optional[Fraction] = None
    seed: int = 0
    samples: int = 20
    jobs: int = 1
    out: Optional[Path] = None
    format: str = "json"
    decimal: bool = False

    def __post_init__(self) -> None:
        if self.p < 2:
            raise ConfigError(f"Field 'p': expected an integer >= 2, got {self.p}")
        if self.rank is not None and self.rank < 1:
            raise ConfigError(f"Field 'rank': expected a positive integer, got {self.rank}")
        for name in ("n_max", "k_max", "samples", "jobs"):
            value = getattr(self, name)
            if value < 1:
                raise ConfigError(f"Field '{name}': expected a positive integer, got {value}")
        if self.seed < 0:
            raise ConfigError(f"Field 'seed': expected a non-negative integer, got {self.seed}")
        if self.eps is not None and self.eps <= 0:
            raise ConfigError(f"Field 'eps': expected a positive rational, got {self.eps}")
        if self.format not in FORMATS:
            raise ConfigError(
                f"Field 'format': expected one of {list(FORMATS)}, got {self.format!r}"
            )


@dataclass
class Table:
    """One CSV block: ``# key = value`` metadata, a header and rows."""

    columns: list[str]
    rows: list[list[Any]]
    metadata: dict[str, Any] = field(default_factory=dict)

    def rendered_rows(self, decimal: bool = False) -> tuple[list[str], list[list[str]]]:
        """Columns and rows with rationals as ``num/den``, plus decimals if asked."""
        rational = [
            i for i, _ in enumerate(self.columns)
            if self.rows and isinstance(self.rows[0][i], Fraction)
        ]
        columns = list(self.columns)
        if decimal:
            columns += [f"{self.columns[i]}_decimal" for i in rational]
        rows = []
        for row in self.rows:
            cells = [_cell(v) for v in row]
            if decimal:
                cells += [format_decimal(row[i]) for i in rational]
            rows.append(cells)
        return columns, rows


def _cell(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        return format_rational(value)
    return str(value)


@dataclass
class ExperimentResult:
    """Output of an experiment.

    Attributes:
        payload: JSON document, with rationals already in ``num/den`` form.
        tables: CSV blocks mirroring ``payload``.
        exit_code: ``0`` on success, ``2`` when an exact check was falsified.
        summary: One human-readable line for stderr.
    """

    payload: dict
    tables: list[Table] = field(default_factory=list)
    exit_code: int = 0
    summary: str = ""


class Experiment(ABC):
    """Abstract base class for runner commands.

    Subclasses set :attr:`NAME` and implement :meth:`run`.

    Attributes:
        NAME: Command name used on the command line.
        REQUIRES_INPUT: Whether ``--input`` is mandatory.
    """

    NAME: str = ""
    REQUIRES_INPUT: bool = False

    def __init__(self, config: ExperimentConfig) -> None:
        """
        Args:
            config: Validated runner settings.
        """
        if self.REQUIRES_INPUT and config.input is None:
            raise ConfigError(f"Field 'input': command '{self.NAME}' needs --input")
        self.config = config

    def load_input(self) -> Optional[Any]:
        """Parsed ``--input`` document, or ``None`` when none was given."""
        if self.config.input is None:
            return None
        return read_json(self.config.input)

    @abstractmethod
    def run(self) -> ExperimentResult:
        """Run the experiment and return its result."""
        ...

    def __repr__(self) -> str:
        return f"<{self.__class__.__name__}(name={self.NAME})>"

