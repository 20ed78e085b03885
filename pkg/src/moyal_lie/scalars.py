"""Gaussian rationals: complex numbers with exact rational parts.

This is the coefficient field for every polynomial in the package.  Both
parts are stored as :class:`fractions.Fraction`, which already keeps the
denominator positive and the fraction reduced.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational
from typing import Union

Scalar = Union[int, Fraction, "GaussianRational"]

_RATIONAL_RE = re.compile(r"^\s*(-?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_rational(text: str) -> Fraction:
    """Parse ``"num/den"`` or ``"num"`` into a Fraction.

    Raises ValueError on anything else, including a zero denominator.
    """
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise ValueError(f"not a rational literal: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def rational_str(x: Fraction) -> str:
    """Always ``num/den``, even for integers."""
    return f"{x.numerator}/{x.denominator}"


def _exact(x) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (int, Rational)):
        raise TypeError(f"expected an int or rational, got {type(x).__name__}")
    return Fraction(x)


class GaussianRational:
    """An exact complex number ``re + i*im`` with rational parts.

    Instances are immutable and hashable.  Equality is structural, which is
    exact because Fraction is always normalized.
    """

    __slots__ = ("re", "im")

    def __init__(self, re: int | Fraction = 0, im: int | Fraction = 0):
        if isinstance(re, GaussianRational):
            re, im = re.re, re.im + _exact(im)
        object.__setattr__(self, "re", _exact(re))
        object.__setattr__(self, "im", _exact(im))

    @classmethod
    def _raw(cls, re: Fraction, im: Fraction) -> GaussianRational:
        obj = object.__new__(cls)
        object.__setattr__(obj, "re", re)
        object.__setattr__(obj, "im", im)
        return obj

    @classmethod
    def coerce(cls, value: Scalar) -> GaussianRational:
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Rational)) and not isinstance(value, bool):
            return cls._raw(Fraction(value), Fraction(0))
        raise TypeError(f"cannot convert {type(value).__name__} to GaussianRational")

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    def __reduce__(self):
        return (GaussianRational, (self.re, self.im))

    # arithmetic

    def __add__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational._raw(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational._raw(-self.re, -self.im)

    def __sub__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational._raw(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            a, b, c, d = self.re, self.im, other.re, other.im
            if not b and not d:
                return GaussianRational._raw(a * c, b)
            return GaussianRational._raw(a * c - b * d, a * d + b * c)
        if isinstance(other, (int, Rational)) and not isinstance(other, bool):
            o = Fraction(other)
            return GaussianRational._raw(self.re * o, self.im * o)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        if not o:
            raise ZeroDivisionError("division by zero GaussianRational")
        norm = o.re * o.re + o.im * o.im
        return self * GaussianRational._raw(o.re / norm, -o.im / norm)

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) / self

    def __pow__(self, n: int):
        if not isinstance(n, int) or isinstance(n, bool):
            raise TypeError("only integer powers are supported")
        if n < 0:
            return ONE / self ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> GaussianRational:
        return GaussianRational._raw(self.re, -self.im)

    def times_i_power(self, k: int) -> GaussianRational:
        """Multiply by ``i**k`` without any rational multiplication."""
        k %= 4
        if k == 0:
            return self
        if k == 1:
            return GaussianRational._raw(-self.im, self.re)
        if k == 2:
            return GaussianRational._raw(-self.re, -self.im)
        return GaussianRational._raw(self.im, -self.re)

    # comparisons and conversions

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Rational)):
            return self.im == 0 and self.re == other
        if isinstance(other, complex):
            return complex(self) == other
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def __repr__(self):
        return f"GaussianRational({self})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "-" if self.im < 0 else "+"
        return f"{self.re}{sign}{abs(self.im)}i"


ZERO = GaussianRational._raw(Fraction(0), Fraction(0))
ONE = GaussianRational._raw(Fraction(1), Fraction(0))
I = GaussianRational._raw(Fraction(0), Fraction(1))
