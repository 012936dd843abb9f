"""
Exact interval exchanges of ``[0, 1)`` and interval-union arithmetic.

An :class:`IntervalExchange` is a finite piecewise translation with rational
breakpoints. It represents fiber maps that are not p-adic, such as a rotation
by ``1/3``, and is what :func:`~padicskew.constructions.approximation.padic_approx`
approximates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from padicskew.errors import BoundaryError, DomainError
from padicskew.models.padic import Interval, PAdicPermutation


def merge_intervals(intervals: Iterable[Interval]) -> list[Interval]:
    """Sort half-open intervals and merge the ones that touch or overlap."""
    out: list[Interval] = []
    for lo, hi in sorted(i for i in intervals if i[0] < i[1]):
        if out and lo <= out[-1][1]:
            out[-1] = (out[-1][0], max(out[-1][1], hi))
        else:
            out.append((lo, hi))
    return out


def union_measure(intervals: Iterable[Interval]) -> Fraction:
    return sum((hi - lo for lo, hi in merge_intervals(intervals)), Fraction(0))


def intersection_measure(a: Sequence[Interval], b: Sequence[Interval]) -> Fraction:
    """Measure of the intersection of two interval unions."""
    a, b = merge_intervals(a), merge_intervals(b)
    total = Fraction(0)
    i = j = 0
    while i < len(a) and j < len(b):
        lo = max(a[i][0], b[j][0])
        hi = min(a[i][1], b[j][1])
        if lo < hi:
            total += hi - lo
        if a[i][1] < b[j][1]:
            i += 1
        else:
            j += 1
    return total


def symdiff_intervals(a: Sequence[Interval], b: Sequence[Interval]) -> Fraction:
    """Measure of the symmetric difference of two interval unions."""
    return union_measure(a) + union_measure(b) - 2 * intersection_measure(a, b)


@dataclass(frozen=True)
class Piece:
    """The translation ``[start, end) -> [start + shift, end + shift)``."""

    start: Fraction
    end: Fraction
    shift: Fraction

    @property
    def image(self) -> Interval:
        return self.start + self.shift, self.end + self.shift


@dataclass(frozen=True)
class IntervalExchange:
    """A measure-preserving piecewise translation of ``[0, 1)``.

    Attributes:
        pieces: Consecutive pieces covering ``[0, 1)``; their images tile
            ``[0, 1)`` as well.
    """

    pieces: tuple[Piece, ...]

    def __post_init__(self) -> None:
        pieces: list[Piece] = []
        for pc in self.pieces:
            piece = Piece(Fraction(pc.start), Fraction(pc.end), Fraction(pc.shift))
            if pieces and pieces[-1].shift == piece.shift and pieces[-1].end == piece.start:
                pieces[-1] = Piece(pieces[-1].start, piece.end, piece.shift)
            else:
                pieces.append(piece)
        object.__setattr__(self, "pieces", tuple(pieces))
        if not pieces:
            raise DomainError("An interval exchange needs at least one piece")
        cursor = Fraction(0)
        for piece in pieces:
            if piece.start != cursor or piece.end <= piece.start:
                raise DomainError(
                    f"Pieces must be consecutive and non-empty, got [{piece.start}, {piece.end}) "
                    f"after {cursor}"
                )
            cursor = piece.end
        if cursor != 1:
            raise DomainError(f"Pieces must cover [0, 1), coverage ends at {cursor}")
        cursor = Fraction(0)
        for lo, hi in sorted(piece.image for piece in pieces):
            if lo != cursor:
                raise DomainError(f"Piece images do not tile [0, 1): gap or overlap at {cursor}")
            cursor = hi
        if cursor != 1:
            raise DomainError(f"Piece images do not tile [0, 1): coverage ends at {cursor}")

    @classmethod
    def identity(cls) -> IntervalExchange:
        return cls((Piece(Fraction(0), Fraction(1), Fraction(0)),))

    @classmethod
    def rotation(cls, alpha: Union[Fraction, int]) -> IntervalExchange:
        """Rotation ``y -> y + alpha (mod 1)``."""
        alpha = Fraction(alpha) % 1
        if alpha == 0:
            return cls.identity()
        return cls(
            (
                Piece(Fraction(0), 1 - alpha, alpha),
                Piece(1 - alpha, Fraction(1), alpha - 1),
            )
        )

    @classmethod
    def from_pieces(cls, pieces: Iterable[tuple[Fraction, Fraction, Fraction]]) -> IntervalExchange:
        return cls(tuple(Piece(*piece) for piece in pieces))

    @classmethod
    def from_permutation(cls, perm: PAdicPermutation) -> IntervalExchange:
        """Express a p-adic permutation as an exchange, merging runs with equal shift."""
        size = perm.size
        pieces: list[Piece] = []
        for j, target in enumerate(perm.mapping):
            shift = Fraction(target - j, size)
            if pieces and pieces[-1].shift == shift:
                last = pieces[-1]
                pieces[-1] = Piece(last.start, Fraction(j + 1, size), shift)
            else:
                pieces.append(Piece(Fraction(j, size), Fraction(j + 1, size), shift))
        return cls(tuple(pieces))

    @property
    def breakpoints(self) -> list[Fraction]:
        """Interior breakpoints where the translation changes."""
        return [piece.start for piece in self.pieces[1:]]

    @property
    def rotation_amount(self) -> Union[Fraction, None]:
        """Return ``alpha`` if this exchange is a rotation by ``alpha``, else ``None``."""
        if len(self.pieces) == 1:
            return Fraction(0)
        if len(self.pieces) == 2:
            first, second = self.pieces
            if first.shift == 1 - first.end and second.shift == first.shift - 1:
                return first.shift
        return None

    def apply_point(self, y: Fraction) -> Fraction:
        """Return the image of ``y``.

        Raises:
            BoundaryError: If ``y`` is outside ``[0, 1)`` or on a breakpoint.
        """
        y = Fraction(y)
        if not 0 <= y < 1:
            raise BoundaryError(f"Point {y} lies outside [0, 1)")
        for piece in self.pieces:
            if piece.start == y and piece.start != 0:
                raise BoundaryError(f"Point {y} lies on a breakpoint of the exchange")
            if piece.start <= y < piece.end:
                return y + piece.shift
        raise BoundaryError(f"Point {y} is not covered by the exchange")

    def image_intervals(self, start: Fraction, end: Fraction) -> list[Interval]:
        """Return the image of ``[start, end)`` as merged intervals."""
        out: list[Interval] = []
        for piece in self.pieces:
            lo = max(Fraction(start), piece.start)
            hi = min(Fraction(end), piece.end)
            if lo < hi:
                out.append((lo + piece.shift, hi + piece.shift))
        return merge_intervals(out)

    def inverse(self) -> IntervalExchange:
        images = sorted((piece.image, -piece.shift) for piece in self.pieces)
        return IntervalExchange(tuple(Piece(lo, hi, shift) for (lo, hi), shift in images))

    def as_permutation(self, p: int) -> Union[PAdicPermutation, None]:
        """Return the exchange as a p-adic permutation when it is one exactly."""
        denominators = [piece.start.denominator for piece in self.pieces]
        denominators += [piece.shift.denominator for piece in self.pieces]
        scale = math.lcm(*denominators)
        rank = 0
        while scale > 1 and scale % p == 0:
            scale //= p
            rank += 1
        if scale != 1:
            return None
        size = p**rank
        mapping = [
            int((Fraction(j, size) + self._shift_at(Fraction(j, size))) * size)
            for j in range(size)
        ]
        return PAdicPermutation(p, rank, tuple(mapping))

    def _shift_at(self, y: Fraction) -> Fraction:
        for piece in self.pieces:
            if piece.start <= y < piece.end:
                return piece.shift
        raise BoundaryError(f"Point {y} is not covered by the exchange")

    def to_dict(self) -> dict:
        from padicskew.utils.rational import format_rational

        alpha = self.rotation_amount
        if alpha is not None:
            return {"rotation": format_rational(alpha)}
        return {
            "pieces": [
                [format_rational(pc.start), format_rational(pc.end), format_rational(pc.shift)]
                for pc in self.pieces
            ]
        }


FiberMap = Union[PAdicPermutation, IntervalExchange]
