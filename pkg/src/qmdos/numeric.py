"""High-precision float projection of exact rationals (mpmath backed)."""

from fractions import Fraction

import mpmath
from mpmath import libmp

DEFAULT_DIGITS = 64


def digits_to_bits(digits: int) -> int:
    return int(digits * 3.3219280948873626) + 4


def to_mpf(x, digits: int = DEFAULT_DIGITS) -> mpmath.mpf:
    """Correctly rounded projection of an exact rational to an mpf."""
    x = Fraction(x)
    raw = libmp.from_rational(x.numerator, x.denominator, digits_to_bits(digits), libmp.round_nearest)
    return mpmath.mp.make_mpf(raw)


def to_decimal_str(x, digits: int) -> str:
    """Render an exact rational with ``digits`` significant digits (``.`` separator)."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    with mpmath.workdps(digits + 5):
        return mpmath.nstr(to_mpf(x, digits + 5), digits, strip_zeros=True)
