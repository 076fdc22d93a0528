"""Scalar rationals.

The stdlib :class:`fractions.Fraction` already keeps the reduced form with a
positive denominator, so it is used directly as the scalar type.
"""

from fractions import Fraction

BigRational = Fraction


def mk_rational(num, den=1):
    """Canonical rational num/den; raises ZeroDivisionError when den == 0."""
    if den == 0:
        raise ZeroDivisionError("zero denominator")
    return Fraction(num, den)


def as_rational(x):
    if isinstance(x, Fraction):
        return x
    return Fraction(x)
