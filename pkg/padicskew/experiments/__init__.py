"""Runner commands. Each module defines one :class:`~padicskew.experiments.base.Experiment`."""
