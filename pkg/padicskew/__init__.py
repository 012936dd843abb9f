"""
padicskew: exact arithmetic for skew products of the unit square over p-adic base maps.

Transformations are ``T(x, y) = (T0 x, T_x y)`` where ``T0`` permutes the
p-adic intervals of X = [0, 1) and the fiber maps are constant on p-adic
cells. Every measure, norm and distance is an exact :class:`fractions.Fraction`.

Usage:
    from padicskew import SkewProduct, odometer
    from padicskew.relative.conditional import mixing_defect_sq
    from padicskew.models.stepfn import half_fiber_indicator

    t = SkewProduct.lift(odometer(2, 3))
    a = half_fiber_indicator(2)
    mixing_defect_sq(t, a, a, 5)   # Fraction(1, 16)
"""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("padicskew")
except PackageNotFoundError:
    __version__ = "unknown"

from padicskew.dynamics import SkewProduct, odometer, swap
from padicskew.models import IntervalExchange, PAdicPermutation, PAdicSet
from padicskew.runner import ExperimentRunner

__all__ = [
    "ExperimentRunner",
    "IntervalExchange",
    "PAdicPermutation",
    "PAdicSet",
    "SkewProduct",
    "odometer",
    "swap",
]
