"""Exact rational numbers and fixed-precision decimal display.

All physical quantities and the clock are exact rationals backed by
``gmpy2.mpq``.  Floats are rejected at every entry point.
"""

from __future__ import annotations

import re
from fractions import Fraction

import gmpy2

Rational = type(gmpy2.mpq(0))

DEFAULT_PRECISION = 10

_LITERAL = re.compile(r"^([+-]?)(\d+)(?:/(\d+)|\.(\d+))?$")


def rat(value, denominator=None) -> Rational:
    """Coerce ``value`` (int, str, Fraction, mpq) to an exact rational.

    >>> rat("15/10")
    mpq(3,2)
    >>> rat("1.5") == rat(3, 2)
    True
    """
    if denominator is not None:
        if denominator == 0:
            raise ZeroDivisionError("zero denominator")
        return gmpy2.mpq(value, denominator)
    if isinstance(value, Rational):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"refusing inexact or boolean value {value!r}")
    if isinstance(value, int):
        return gmpy2.mpq(value)
    if isinstance(value, Fraction):
        return gmpy2.mpq(value.numerator, value.denominator)
    if isinstance(value, str):
        return parse_rational(value)
    if type(value).__name__ == "mpz":
        return gmpy2.mpq(value)
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


def parse_rational(text: str) -> Rational:
    """Parse ``p``, ``-p``, ``p/q`` or an exact decimal ``d.ddd``."""
    m = _LITERAL.match(text.strip())
    if m is None:
        raise ValueError(f"invalid rational literal {text!r}")
    sign, whole, denom, frac = m.groups()
    if denom is not None:
        if int(denom) == 0:
            raise ValueError(f"zero denominator in {text!r}")
        value = gmpy2.mpq(int(whole), int(denom))
    elif frac is not None:
        value = gmpy2.mpq(int(whole + frac), 10 ** len(frac))
    else:
        value = gmpy2.mpq(int(whole))
    return -value if sign == "-" else value


def to_text(x: Rational) -> str:
    """Lowest-terms text form, ``p`` or ``p/q``; inverse of :func:`parse_rational`."""
    x = rat(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def rat_pow(a: Rational, n: int) -> Rational:
    if n < 0:
        raise ValueError("exponent must be non-negative")
    result = gmpy2.mpq(1)
    base = rat(a)
    while n:
        if n & 1:
            result *= base
        base *= base
        n >>= 1
    return result


def display(x: Rational, precision: int = DEFAULT_PRECISION) -> str:
    """Decimal string with exactly ``precision`` digits, truncated toward zero.

    Works on integers only, so it is safe for numerators far beyond the
    interpreter's int-to-str digit limit.

    >>> display(rat(363, 875))
    '0.4148571428'
    >>> display(rat(-1, 2), 3)
    '-0.500'
    """
    if precision < 1:
        raise ValueError("precision must be at least 1")
    x = rat(x)
    scale = 10**precision
    magnitude = abs(x.numerator) * scale // x.denominator
    whole, frac = divmod(magnitude, scale)
    sign = "-" if x < 0 else ""
    return f"{sign}{whole}.{str(frac).rjust(precision, '0')}"
