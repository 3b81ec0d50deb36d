"""
Exact scalar helpers shared by all modules.

Provides the type aliases for rational and integer vectors, parsing of the
"p/q" text form used in problem files and rendering back to it, and the
conversions between Fractions and elements of the sympy field QQ.
"""

import re
from fractions import Fraction
from typing import Any, Iterable, Sequence, Tuple, Union

from sympy import QQ

from ..models.error_codes import ValidationError

# Type aliases
Rational = Fraction
RationalVector = Tuple[Fraction, ...]
IntegerVector = Tuple[int, ...]
IntegerMatrix = Tuple[Tuple[int, ...], ...]

RationalLike = Union[int, str, Fraction]

_RATIONAL_PATTERN = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def parse_rational(value: RationalLike, field: str = "value") -> Fraction:
    """Parse an exact rational from an int, a Fraction or a "p/q" string.

    Args:
        value: Input value
        field: Field name reported on failure

    Returns:
        The parsed rational

    Raises:
        ValidationError: If the value is not an exact rational
    """
    if isinstance(value, bool):
        raise ValidationError(f"expected a rational, got {value!r}", field)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        match = _RATIONAL_PATTERN.match(value.replace("−", "-"))
        if match:
            denominator = int(match.group(2)) if match.group(2) else 1
            if denominator == 0:
                raise ValidationError("zero denominator", field)
            return Fraction(int(match.group(1)), denominator)
    raise ValidationError(f"expected a rational 'p/q', got {value!r}", field)


def format_rational(value: Fraction) -> str:
    """Render a rational as "p/q", or "p" when integral."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def rational_vector(values: Iterable[RationalLike], field: str = "vector") -> RationalVector:
    """Convert a sequence of rational-like values into a RationalVector."""
    return tuple(
        parse_rational(v, f"{field}[{i}]") for i, v in enumerate(values)
    )


def integer_vector(values: Iterable[int], field: str = "vector") -> IntegerVector:
    """Convert a sequence into an IntegerVector, rejecting non-integers."""
    result = []
    for i, v in enumerate(values):
        if isinstance(v, bool) or not isinstance(v, int):
            raise ValidationError(f"expected an integer, got {v!r}", f"{field}[{i}]")
        result.append(v)
    return tuple(result)


def pairing(a: Sequence[Union[int, Fraction]], b: Sequence[Union[int, Fraction]]) -> Fraction:
    """Pairing between t* and t in the standard bases."""
    if len(a) != len(b):
        raise ValidationError(f"dimension mismatch {len(a)} != {len(b)}")
    return Fraction(sum(x * y for x, y in zip(a, b)))


def to_qq(value: Union[int, Fraction]) -> Any:
    """Element of QQ equal to an int or Fraction."""
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def from_qq(value: Any) -> Fraction:
    """Fraction equal to an element of QQ or ZZ."""
    numerator = getattr(value, "numerator", value)
    denominator = getattr(value, "denominator", 1)
    return Fraction(int(numerator), int(denominator))
