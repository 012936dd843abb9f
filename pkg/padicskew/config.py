"""
Resolution configuration for padicskew.

Defines :class:`ResolutionConfig`, the process-wide cap on cell counts, and
helpers to read and override it. Every constructor that creates p^k cells
checks its rank against :func:`max_rank` so that exact computations stay
bounded.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass, replace
from typing import Iterator

from padicskew.errors import CapExceededError, ConfigError


@dataclass(frozen=True)
class ResolutionConfig:
    """Limits on the resolution of exact computations.

    Attributes:
        max_cells: Largest number of rank-k cells ``p**k`` allowed on one axis.
            The default admits rank 12 for ``p = 2``.
        max_search_rank: Highest rank :func:`~padicskew.constructions.approximation.padic_approx`
            inspects when reporting the rank an accuracy would require.
    """

    max_cells: int = 4096
    max_search_rank: int = 48

    def __post_init__(self) -> None:
        if self.max_cells < 2:
            raise ConfigError(f"max_cells must be at least 2, got {self.max_cells}")
        if self.max_search_rank < 1:
            raise ConfigError(
                f"max_search_rank must be positive, got {self.max_search_rank}"
            )


_active: ResolutionConfig = ResolutionConfig()


def get_config() -> ResolutionConfig:
    """Return the active resolution configuration."""
    return _active


def configure(**overrides: int) -> ResolutionConfig:
    """Replace fields of the active configuration.

    Args:
        **overrides: Field values, e.g. ``max_cells=256``.

    Returns:
        The new active configuration.
    """
    global _active
    try:
        _active = replace(_active, **overrides)
    except TypeError as exc:
        raise ConfigError(f"Unknown resolution setting: {exc}") from exc
    return _active


@contextmanager
def override_config(**overrides: int) -> Iterator[ResolutionConfig]:
    """Temporarily override the active configuration."""
    global _active
    previous = _active
    try:
        yield configure(**overrides)
    finally:
        _active = previous


def max_rank(p: int) -> int:
    """Return the largest rank ``k`` with ``p**k <= max_cells``."""
    if p < 2:
        raise ConfigError(f"p must be at least 2, got {p}")
    cells, rank = p, 0
    while cells <= _active.max_cells:
        cells *= p
        rank += 1
    return rank


def check_rank(p: int, rank: int, what: str = "rank") -> None:
    """Raise :class:`CapExceededError` if ``rank`` exceeds the cap for ``p``."""
    cap = max_rank(p)
    if rank > cap:
        raise CapExceededError(
            f"{what} {rank} exceeds the configured cap {cap} for p={p} "
            f"(max_cells={_active.max_cells})"
        )
