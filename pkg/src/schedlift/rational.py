"""Exact rational helpers shared by every module."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

__all__ = ["Fraction", "as_fraction", "lower_factorial", "format_fraction", "parse_fraction"]


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are rejected: every value in this package must be exact.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return parse_fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def parse_fraction(text: str) -> Fraction:
    text = text.strip()
    if not text:
        raise ValueError("empty rational literal")
    if any(c in text for c in ".eE") and "/" not in text:
        raise ValueError(f"decimal literal {text!r} is not allowed; use p/q")
    return Fraction(text)


def format_fraction(value) -> str:
    value = as_fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def lower_factorial(a, b: int) -> Fraction:
    """Falling factorial ``a (a-1) ... (a-b+1)``; equals 1 for ``b == 0``."""
    if b < 0:
        raise ValueError("b must be a natural number")
    a = as_fraction(a)
    out = Fraction(1)
    for t in range(b):
        out *= a - t
    return out
