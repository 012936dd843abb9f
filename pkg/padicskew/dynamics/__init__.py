"""Base maps and skew products of the unit square."""

from padicskew.dynamics.base_maps import odometer, swap
from padicskew.dynamics.skew import PointZ, SkewProduct, conjugate, koopman_pullback

__all__ = ["PointZ", "SkewProduct", "conjugate", "koopman_pullback", "odometer", "swap"]
