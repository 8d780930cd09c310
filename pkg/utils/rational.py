"""Exact rationals in pydantic models, serialised as "p/q" strings in JSON"""
from fractions import Fraction
from typing import Annotated, Any

from pydantic import PlainSerializer, PlainValidator


def to_fraction(value: Any) -> Fraction:
    """Accept Fraction, int, "p/q" / decimal strings and floats (via their decimal repr)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        # 0.237 must mean 237/1000, not the nearest binary double
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"not a rational: {value!r}") from e
    raise ValueError(f"not a rational: {value!r}")


def format_fraction(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


Rational = Annotated[
    Fraction,
    PlainValidator(to_fraction),
    PlainSerializer(format_fraction, return_type=str, when_used="json"),
]
