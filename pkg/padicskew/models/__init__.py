"""Exact p-adic model classes: intervals, sets, permutations, exchanges and step functions."""

from padicskew.models.distance import symdiff_measure, weak_distance
from padicskew.models.exchange import FiberMap, IntervalExchange, Piece
from padicskew.models.padic import PAdicInterval, PAdicPermutation, PAdicSet
from padicskew.models.stepfn import StepFunctionX, StepFunctionZ

__all__ = [
    "FiberMap",
    "IntervalExchange",
    "PAdicInterval",
    "PAdicPermutation",
    "PAdicSet",
    "Piece",
    "StepFunctionX",
    "StepFunctionZ",
    "symdiff_measure",
    "weak_distance",
]
