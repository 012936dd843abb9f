"""
Conditional expectation onto the base and the relative defect functionals.

The mixing defect compares ``E(T^n f · g | X)`` with the base-transported
product ``T0^n (E(f|X) · E(g|X))``; the rigidity defect compares it with
``E(T0^n f · g | X)`` for the lifted base. Both are returned squared.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from padicskew.dynamics.skew import SkewProduct, koopman_pullback
from padicskew.errors import DomainError
from padicskew.models.padic import PAdicPermutation, same_base
from padicskew.models.stepfn import StepFunctionX, StepFunctionZ

logger = logging.getLogger(__name__)


class DefectKind(str, Enum):
    """Which relative defect a report holds."""

    MIXING = "mixing"
    RIGIDITY = "rigidity"

    def __str__(self) -> str:
        return self.value


def cond_exp(f: StepFunctionZ) -> StepFunctionX:
    """Return ``E(f|X)``, the fiber average of ``f``."""
    return f.row_means()


def koopman_base(base: PAdicPermutation, g: StepFunctionX) -> StepFunctionX:
    """Return ``g ∘ T0^-1`` on X."""
    same_base(base.p, g.p)
    rank = max(base.rank, g.rank)
    values = g.refine(rank).values
    out = np.empty(values.size, dtype=object)
    out[base.refine(rank).array] = values
    return StepFunctionX(g.p, rank, out)


def _check_n(n: int) -> None:
    if n < 0:
        raise DomainError(f"n must be non-negative, got {n}")


def mixing_defect_from_power(power: SkewProduct, f: StepFunctionZ, g: StepFunctionZ) -> Fraction:
    """Mixing defect² given the precomputed power ``T^n``."""
    correlation = cond_exp(koopman_pullback(power, f) * g)
    transported = koopman_base(power.base, cond_exp(f) * cond_exp(g))
    return (correlation - transported).l2_norm_sq()


def rigidity_defect_from_power(
    power: SkewProduct, f: StepFunctionZ, g: StepFunctionZ
) -> Fraction:
    """Rigidity defect² given the precomputed power ``T^n``."""
    lifted = SkewProduct.lift(power.base)
    correlation = cond_exp(koopman_pullback(power, f) * g)
    reference = cond_exp(koopman_pullback(lifted, f) * g)
    return (correlation - reference).l2_norm_sq()


def mixing_defect_sq(t: SkewProduct, f: StepFunctionZ, g: StepFunctionZ, n: int) -> Fraction:
    """Return ``‖E(T^n f · g | X) − T0^n(E(f|X) · E(g|X))‖²``.

    ``T`` is a strongly mixing extension at scale ``(f, g, N, tol)`` when this
    stays at most ``tol²`` for every ``n >= N``.

    Args:
        t: The skew product.
        f: First test function.
        g: Second test function (real-valued, so no conjugation).
        n: Time, ``n >= 0``.

    Raises:
        DomainError: If ``n`` is negative.
        CapExceededError: If the common rank exceeds the configured cap.
    """
    _check_n(n)
    return mixing_defect_from_power(t.power(n), f, g)


def rigidity_defect_sq(t: SkewProduct, f: StepFunctionZ, g: StepFunctionZ, n: int) -> Fraction:
    """Return ``‖E(T^n f · g | X) − E(T0^n f · g | X)‖²`` with ``T0`` lifted to Z."""
    _check_n(n)
    return rigidity_defect_from_power(t.power(n), f, g)


_DEFECTS = {
    DefectKind.MIXING: mixing_defect_from_power,
    DefectKind.RIGIDITY: rigidity_defect_from_power,
}


@dataclass
class DefectReport:
    """The sequence ``n -> defect²`` for one pair of test functions.

    Attributes:
        kind: Mixing or rigidity.
        entries: ``(n, defect_sq)`` pairs sorted by ``n``.
        f: First test function, if kept.
        g: Second test function, if kept.
    """

    kind: DefectKind
    entries: list[tuple[int, Fraction]] = field(default_factory=list)
    f: Optional[StepFunctionZ] = field(default=None, repr=False)
    g: Optional[StepFunctionZ] = field(default=None, repr=False)

    def __post_init__(self) -> None:
        self.kind = DefectKind(self.kind)
        self.entries = sorted((int(n), Fraction(d)) for n, d in self.entries)
        for n, defect in self.entries:
            if defect < 0:
                raise DomainError(f"Defect at n={n} is negative: {defect}")

    def rigidity_times(self, tol: Union[Fraction, int] = 0) -> list[int]:
        """Times whose defect² is at most ``tol²``."""
        bound = Fraction(tol) ** 2
        return [n for n, defect in self.entries if defect <= bound]

    def values(self) -> list[Fraction]:
        return [defect for _, defect in self.entries]

    def to_dict(self) -> dict:
        from padicskew.utils.rational import format_rational

        return {
            "kind": str(self.kind),
            "entries": [
                {"n": n, "defect_sq": format_rational(defect)} for n, defect in self.entries
            ],
        }


def scan_defects(
    t: SkewProduct,
    f: StepFunctionZ,
    g: StepFunctionZ,
    n_max: int,
    kind: Union[DefectKind, str] = DefectKind.RIGIDITY,
) -> DefectReport:
    """Evaluate one defect for ``n = 1 .. n_max``.

    Powers are accumulated one composition at a time.
    """
    kind = DefectKind(kind)
    if n_max < 1:
        raise DomainError(f"n_max must be at least 1, got {n_max}")
    defect = _DEFECTS[kind]
    entries = [(n, defect(power, f, g)) for n, power in t.iter_powers(n_max)]
    logger.debug("Scanned %s defect for n = 1..%d", kind, n_max)
    return DefectReport(kind, entries, f, g)


def scan_both(
    t: SkewProduct, f: StepFunctionZ, g: StepFunctionZ, n_max: int
) -> dict[DefectKind, DefectReport]:
    """Evaluate the mixing and rigidity defects over one pass of powers."""
    if n_max < 1:
        raise DomainError(f"n_max must be at least 1, got {n_max}")
    rows: dict[DefectKind, list[tuple[int, Fraction]]] = {kind: [] for kind in DefectKind}
    for n, power in t.iter_powers(n_max):
        for kind in DefectKind:
            rows[kind].append((n, _DEFECTS[kind](power, f, g)))
    return {kind: DefectReport(kind, entries, f, g) for kind, entries in rows.items()}
