"""
Exact rational helpers.

All measures and norms are :class:`fractions.Fraction` values. They are written
as ``"num/den"`` in lowest terms with a positive denominator.
"""

from __future__ import annotations

from decimal import ROUND_HALF_EVEN, Context, Decimal
from fractions import Fraction
from typing import Union

import regex

from padicskew.errors import ConfigError

Rational = Fraction
RationalLike = Union[Fraction, int, str]

_RATIONAL = regex.compile(r"^\s*(?P<num>[+-]?\d+)(?:\s*/\s*(?P<den>\d+))?\s*$")

_DECIMAL_CONTEXT = Context(prec=20, rounding=ROUND_HALF_EVEN)


def parse_rational(text: str, field: str = "value") -> Fraction:
    """Parse ``"num/den"`` (or a bare integer) into a :class:`Fraction`.

    Args:
        text: The literal to parse.
        field: Name of the field being parsed, used in error messages.

    Raises:
        ConfigError: If the literal is malformed or has a zero denominator.
    """
    match = _RATIONAL.match(text)
    if match is None:
        raise ConfigError(f"Field '{field}': expected 'num/den', got {text!r}")
    den = int(match.group("den") or 1)
    if den == 0:
        raise ConfigError(f"Field '{field}': zero denominator in {text!r}")
    return Fraction(int(match.group("num")), den)


def as_rational(value: RationalLike, field: str = "value") -> Fraction:
    """Coerce an int, Fraction or ``"num/den"`` string to a Fraction."""
    if isinstance(value, str):
        return parse_rational(value, field)
    if isinstance(value, bool) or not isinstance(value, (int, Fraction)):
        raise ConfigError(f"Field '{field}': expected a rational, got {value!r}")
    return Fraction(value)


def format_rational(value: Union[Fraction, int]) -> str:
    """Return the canonical ``"num/den"`` form, e.g. ``"0/1"`` or ``"1/16"``."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def format_decimal(value: Union[Fraction, int]) -> str:
    """Render a rational with 20 significant digits, rounding half to even.

    The decimal rendering is for reading reports only; the rational stays
    authoritative.
    """
    value = Fraction(value)
    quotient = _DECIMAL_CONTEXT.divide(Decimal(value.numerator), Decimal(value.denominator))
    return str(quotient)
