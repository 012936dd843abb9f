"""
Experiment registry for padicskew.

:class:`ExperimentRegistry` maps command names to their implementing classes.
"""

from __future__ import annotations

from padicskew.errors import ConfigError
from padicskew.experiments.base import Experiment


class ExperimentRegistry:
    """Maps command names to :class:`Experiment` subclasses."""

    _registry: dict[str, type[Experiment]] = {}

    @classmethod
    def register(cls, experiment_class: type[Experiment]) -> None:
        """Register an experiment under its ``NAME``."""
        if not experiment_class.NAME:
            raise ValueError(f"{experiment_class.__name__} has no NAME")
        cls._registry[experiment_class.NAME] = experiment_class

    @classmethod
    def get(cls, name: str) -> type[Experiment]:
        """Get the experiment class for a command.

        Raises:
            ConfigError: If the command is unknown.
        """
        if name not in cls._registry:
            raise ConfigError(
                f"Field 'command': unknown command '{name}'. Available: {cls.available()}"
            )
        return cls._registry[name]

    @classmethod
    def available(cls) -> list[str]:
        return sorted(cls._registry)


def _register_builtins() -> None:
    """Register all built-in experiments."""
    from padicskew.experiments.category_sweep import CategorySweepExperiment
    from padicskew.experiments.conjugator import BuildConjugatorExperiment
    from padicskew.experiments.defect_scan import DefectScanExperiment
    from padicskew.experiments.rigidify import RigidifyExperiment

    ExperimentRegistry.register(DefectScanExperiment)
    ExperimentRegistry.register(CategorySweepExperiment)
    ExperimentRegistry.register(BuildConjugatorExperiment)
    ExperimentRegistry.register(RigidifyExperiment)


_register_builtins()
