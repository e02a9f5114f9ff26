"""Exact conversions for times and masses."""

import math
from fractions import Fraction
from numbers import Rational
from typing import Union

Number = Union[Fraction, float, int]


def as_time(value: Union[Number, str]) -> Fraction:
    """Convert a time to an exact fraction.

    Floats go through their shortest decimal representation, so ``0.1``
    becomes ``1/10`` rather than the binary expansion.
    """
    if isinstance(value, bool):
        raise TypeError("Booleans are not times")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, Rational):
        return Fraction(int(value.numerator), int(value.denominator))
    if isinstance(value, str):
        return Fraction(value)
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"Non-finite time {value}")
    return Fraction(repr(value))


def as_exact(value: Union[Number, str]) -> Number:
    """Keep rationals exact and pass floats through unchanged."""
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, (Fraction, int)) and not isinstance(value, bool):
        return Fraction(value)
    return float(value)


def is_exact(*values: object) -> bool:
    return all(
        isinstance(v, (int, Fraction, str)) and not isinstance(v, bool) for v in values
    )


def format_number(value: Number) -> str:
    """Lossless text form: ``p/q`` for fractions, ``repr`` for floats."""
    if isinstance(value, float):
        return repr(value)
    return str(Fraction(value))


def parse_number(text: str) -> Number:
    text = text.strip()
    lowered = text.lower()
    if "." in text or "e" in lowered or "inf" in lowered or "nan" in lowered:
        return float(text)
    return Fraction(text)
