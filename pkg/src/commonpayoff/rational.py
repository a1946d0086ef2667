"""Exact rational scalars.

:class:`fractions.Fraction` already keeps values in lowest terms with a
positive denominator, so it is used directly. This module only adds the strict
text format used by the file formats: ``"p/q"`` or a bare integer.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import ParseError

Rational = Fraction

_RATIONAL_RE = re.compile(r"\s*([+-]?\d+)\s*(?:/\s*([+-]?\d+)\s*)?")


def parse_rational(value: str | int | Fraction) -> Fraction:
    """Parse ``"p/q"``, ``"p"`` or an integer into a :class:`Fraction`.

    Zero and negative denominators are rejected rather than normalised, and
    decimal notation is refused: games are exact by construction.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ParseError(f"expected a rational, got boolean {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if not isinstance(value, str):
        raise ParseError(f"expected a rational string or integer, got {type(value).__name__} {value!r}")
    m = _RATIONAL_RE.fullmatch(value)
    if m is None:
        raise ParseError(f"not a rational of the form p/q: {value!r}")
    num = int(m.group(1))
    if m.group(2) is None:
        return Fraction(num)
    den = int(m.group(2))
    if den <= 0:
        raise ParseError(f"denominator must be positive in {value!r}")
    return Fraction(num, den)


def format_rational(x: Fraction | int, always_fraction: bool = False) -> str:
    x = Fraction(x)
    if x.denominator == 1 and not always_fraction:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def format_decimal(x: Fraction, digits: int = 6) -> str:
    """Human-readable approximation, marked with a leading ``~``."""
    return f"~{float(x):.{digits}f}"
