"""The numeric contract: exact rationals by default, floats by explicit policy.

The exact scalar type is :class:`fractions.Fraction`.  It already provides
everything the library requires from its number type: unbounded integer
numerator and denominator, a strictly positive denominator, eager reduction
to lowest terms after every arithmetic operation, decidable exact equality,
immutability (and therefore thread safety).  This module fixes the
serialization format ("num/den", bare integers accepted) and the rules for
crossing into floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational as _RationalABC

from .errors import FloatOverflowError, MalformedRationalError

#: The exact scalar type used everywhere in the library.
Rational = Fraction

RationalLike = "Rational | int | str"


def as_rational(value) -> Rational:
    """Coerce ints, rational strings and Fractions to the exact scalar type.

    Floats are rejected: an exact value must never be created from an
    inexact one by accident.  Use :func:`from_float` when the bit pattern of
    a double is genuinely the intended value.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, _RationalABC)):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise MalformedRationalError(f"cannot interpret {value!r} as an exact rational")


def parse_rational(text: str) -> Rational:
    """Parse "num/den" or a bare integer string."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise MalformedRationalError(f"malformed rational {text!r}") from exc


def format_rational(value: Rational) -> str:
    """Render as "num/den", or a bare integer when the denominator is 1."""
    value = as_rational(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def to_float(value: Rational) -> float:
    """Nearest double to an exact rational (deterministic round-to-nearest).

    Values whose magnitude exceeds the double range raise
    :class:`FloatOverflowError` instead of silently returning infinity.
    """
    try:
        result = float(value)
    except OverflowError as exc:
        raise FloatOverflowError(f"{value} overflows a double") from exc
    if math.isinf(result):
        raise FloatOverflowError(f"{value} overflows a double")
    return result


def from_float(value: float) -> Rational:
    """Exact rational with the same value as the given double."""
    if math.isnan(value) or math.isinf(value):
        raise MalformedRationalError(f"{value!r} has no exact rational value")
    return Fraction(value)


@dataclass(frozen=True)
class FloatPolicy:
    """Tolerances governing every floating-point comparison in the library."""

    absolute_tolerance: float = 1e-12
    relative_tolerance: float = 1e-12

    def __post_init__(self):
        if not (self.absolute_tolerance > 0 and self.relative_tolerance > 0):
            raise MalformedRationalError("tolerances must be strictly positive")

    def close(self, a: float, b: float) -> bool:
        gap = abs(a - b)
        return gap <= self.absolute_tolerance or gap <= self.relative_tolerance * max(abs(a), abs(b))


DEFAULT_POLICY = FloatPolicy()
