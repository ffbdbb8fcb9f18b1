"""Number formatting and exact-arithmetic helpers."""

import math
from fractions import Fraction
from typing import Union

POWERS_OF_3: tuple[int, ...] = tuple(3**i for i in range(41))

Number = Union[int, float, Fraction]


def format_decimal(value: Number) -> str:
    """Format a number as a decimal string with 17 significant digits.

    Integers and floats with integral values are written without a fraction
    part so the output is identical across platforms.
    """
    x = float(value)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == 0:
        return "0"
    return format(x, ".17g")


def format_rational(value: Union[Fraction, int]) -> str:
    """Format an exact rational as ``p`` or ``p/q``."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text: str) -> Fraction:
    """Parse ``p/q``, an integer or a finite decimal into a Fraction."""
    text = text.strip()
    if not text:
        raise ValueError("empty number")
    return Fraction(text)


def is_rational_text(text: str) -> bool:
    """True when the text is an integer or ``p/q`` (no decimal point or exponent)."""
    body = text.strip().lstrip("+-")
    if "/" in body:
        numerator, _, denominator = body.partition("/")
        return numerator.isdigit() and denominator.isdigit()
    return body.isdigit()

