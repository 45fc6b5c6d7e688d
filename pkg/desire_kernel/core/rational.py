import re
from fractions import Fraction
from typing import Any

ZERO = Fraction(0)
ONE = Fraction(1)

_RATIONAL_LITERAL = re.compile(r"^\s*(?P<num>[+-]?\d+)(?:\s*/\s*(?P<den>\d+))?\s*$")


def parse_rational(value: Any) -> Fraction:
    """Parse an exact rational from an integer or a `"p/q"` / `"p"` string.

    Floats are refused.

    Raises:
        ValueError: on any other input, or a zero denominator.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    if isinstance(value, str):
        match = _RATIONAL_LITERAL.match(value)
        if match is not None:
            denominator = int(match.group("den") or 1)
            if denominator == 0:
                raise ValueError(f"zero denominator in rational {value!r}")
            return Fraction(int(match.group("num")), denominator)
    raise ValueError(f"not an exact rational: {value!r} (expected 'p/q' or integer)")


def format_rational(value: Fraction) -> str:
    """Lowest terms, integers without `/1`."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
