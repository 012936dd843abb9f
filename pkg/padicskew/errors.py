"""
Exception hierarchy for padicskew.

Every error carries the exit code the command-line runner reports for it:
``1`` for usage and parse problems, ``2`` when an exact self-check is
falsified, ``3`` for resolution and rank-cap limits.
"""

from __future__ import annotations

from typing import Optional


class PadicSkewError(Exception):
    """Base class for all padicskew errors."""

    exit_code: int = 1


class RankError(PadicSkewError, ValueError):
    """Raised when a rank is invalid or an object is refined to a lower rank."""


class BaseMismatchError(PadicSkewError, ValueError):
    """Raised when objects built over different bases ``p`` are combined."""


class SpaceMismatchError(PadicSkewError, ValueError):
    """Raised when maps or functions on different spaces are combined."""


class DomainError(PadicSkewError, ValueError):
    """Raised when an operation's precondition is violated."""


class BoundaryError(PadicSkewError, ValueError):
    """Raised when a point lies on a cell boundary of the rank in use."""


class ConfigError(PadicSkewError, ValueError):
    """Raised for malformed experiment configuration or input documents."""


class CapExceededError(PadicSkewError):
    """Raised when a rank exceeds the configured cap."""

    exit_code = 3


class TowerError(PadicSkewError):
    """Raised when a base map admits no Rokhlin tower of the requested height."""

    exit_code = 3


class ResolutionError(PadicSkewError):
    """Raised when the requested accuracy needs more resolution than allowed.

    Attributes:
        required_rank: The smallest rank (or tower depth) that would meet the
            requested accuracy, when it could be determined.
    """

    exit_code = 3

    def __init__(self, message: str, required_rank: Optional[int] = None) -> None:
        super().__init__(message)
        self.required_rank = required_rank


class VerificationError(PadicSkewError):
    """Raised when an exact certificate check fails."""

    exit_code = 2


class ExclusionViolation(VerificationError):
    """Raised when a sampled transformation lies in both P'_k and M'_k.

    Attributes:
        counterexample: Serialized description of the offending row.
    """

    def __init__(self, message: str, counterexample: Optional[dict] = None) -> None:
        super().__init__(message)
        self.counterexample = counterexample or {}
