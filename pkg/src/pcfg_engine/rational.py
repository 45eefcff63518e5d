"""Exact rational numbers on pydantic surfaces."""

from fractions import Fraction
from typing import Annotated

from pydantic import PlainSerializer, PlainValidator


def parse_rational(value: object) -> Fraction:
    """Parse ``"1/16"``, ``"1e-9"``, integers or fractions into a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError(f"Not a rational number: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        # repr keeps the decimal the user wrote, not the binary expansion
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"Not a rational number: {value!r}") from e
    raise ValueError(f"Not a rational number: {value!r}")


def format_rational(value: Fraction) -> str:
    return str(value)


Rational = Annotated[
    Fraction,
    PlainValidator(parse_rational),
    PlainSerializer(format_rational, return_type=str),
]
