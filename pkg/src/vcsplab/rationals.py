"""Exact rational numbers and their string form.

All arithmetic in this package is exact.  The public rational type is
``fractions.Fraction``; the LP solver internally switches to ``gmpy2.mpq``
when available (same semantics, much faster) and converts back at its
boundary.
"""

from __future__ import annotations

from fractions import Fraction

try:
    from gmpy2 import mpq as fast_rational  # noqa: F401
    HAVE_GMPY2 = True
except ImportError:  # pragma: no cover - gmpy2 is a hard dep, but degrade gracefully
    fast_rational = Fraction
    HAVE_GMPY2 = False

Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def rat(value, den=None) -> Fraction:
    """Coerce ints, strings like "3/4", and rationals to Fraction."""
    if den is not None:
        return Fraction(value, den)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise TypeError("floating point values are not accepted; pass int, Fraction or 'p/q' string")
    # gmpy2.mpq and friends
    return Fraction(value.numerator, value.denominator)


def rat_str(q) -> str:
    """Serialize exactly: integers as "n", otherwise "p/q"."""
    q = rat(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rat(text) -> Fraction:
    """Parse the JSON wire form: an int or a "p/q" / "n" string.

    Decimal or scientific notation is rejected; the wire format is exact.
    """
    if isinstance(text, bool):
        raise TypeError("boolean is not a rational")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, str):
        body = text.strip()
        if "." in body or "e" in body or "E" in body:
            raise ValueError(f"not an exact 'p/q' rational: {text!r}")
        return Fraction(body)
    raise TypeError(f"cannot parse rational from {type(text).__name__}")
