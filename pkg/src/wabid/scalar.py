"""Exact arithmetic in the Gaussian rationals Q(i).

Rationals are :class:`fractions.Fraction` (always reduced, positive
denominator).  :class:`Scalar` pairs two of them.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Union

__all__ = ["Scalar", "ScalarParseError", "ZERO", "ONE", "I_UNIT", "as_scalar", "parse_scalar"]

Number = Union[int, Fraction, "Scalar"]


class ScalarParseError(ValueError):
    pass


class Scalar:
    """A number re + im*i with rational parts.  Immutable."""

    __slots__ = ("re", "im")

    def __init__(self, re: int | Fraction = 0, im: int | Fraction = 0):
        if not isinstance(re, Fraction):
            re = Fraction(re)
        if not isinstance(im, Fraction):
            im = Fraction(im)
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    def __reduce__(self):
        return Scalar, (self.re, self.im)

    # -- predicates --------------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    @property
    def is_real(self) -> bool:
        return not self.im

    def is_integer(self) -> bool:
        return not self.im and self.re.denominator == 1

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other: Number) -> Scalar:
        o = as_scalar(other)
        return Scalar(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other: Number) -> Scalar:
        o = as_scalar(other)
        return Scalar(self.re - o.re, self.im - o.im)

    def __rsub__(self, other: Number) -> Scalar:
        return as_scalar(other) - self

    def __neg__(self) -> Scalar:
        return Scalar(-self.re, -self.im)

    def __mul__(self, other: Number) -> Scalar:
        o = as_scalar(other)
        if not self.im and not o.im:
            return Scalar(self.re * o.re)
        return Scalar(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def inv(self) -> Scalar:
        if not self:
            raise ZeroDivisionError("inverse of zero scalar")
        if not self.im:
            return Scalar(1 / self.re)
        n = self.re * self.re + self.im * self.im
        return Scalar(self.re / n, -self.im / n)

    def __truediv__(self, other: Number) -> Scalar:
        return self * as_scalar(other).inv()

    def __rtruediv__(self, other: Number) -> Scalar:
        return as_scalar(other) * self.inv()

    def conjugate(self) -> Scalar:
        return Scalar(self.re, -self.im)

    # -- comparison / hashing ---------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, Scalar):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, _RationalABC)):
            return not self.im and self.re == other
        return NotImplemented

    def __hash__(self) -> int:
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    # -- text --------------------------------------------------------------
    def __str__(self) -> str:
        if not self.im:
            return str(self.re)
        sign = "-" if self.im < 0 else "+"
        im = abs(self.im)
        return f"{self.re}{sign}{im.numerator}/{im.denominator}i"

    def __repr__(self) -> str:
        return f"Scalar({self})"


def as_scalar(x: Number) -> Scalar:
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, Fraction)):
        return Scalar(x)
    if isinstance(x, str):
        return parse_scalar(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to Scalar")


ZERO = Scalar(0)
ONE = Scalar(1)
I_UNIT = Scalar(0, 1)

_RAT = r"[+-]?\d+(?:/\d+)?"
_REAL_RE = re.compile(rf"^({_RAT})$")
_IMAG_RE = re.compile(r"^([+-]?(?:\d+(?:/\d+)?)?)i$")
_COMPLEX_RE = re.compile(rf"^({_RAT})([+-](?:\d+(?:/\d+)?)?)i$")


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except ZeroDivisionError as exc:
        raise ScalarParseError(f"zero denominator in {text!r}") from exc
    except ValueError as exc:
        raise ScalarParseError(f"bad rational {text!r}") from exc


def _imag_part(text: str) -> Fraction:
    if text in ("", "+"):
        return Fraction(1)
    if text == "-":
        return Fraction(-1)
    return _rational(text)


def parse_scalar(text: str) -> Scalar:
    """Parse ``p/q``, ``p/q+r/si``, ``r/si`` (also bare integers, ``i``).

    Surrounding parentheses and whitespace are ignored.
    """
    s = text.strip().replace(" ", "")
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    if not s:
        raise ScalarParseError("empty scalar")
    m = _REAL_RE.match(s)
    if m:
        return Scalar(_rational(m.group(1)))
    m = _COMPLEX_RE.match(s)
    if m:
        return Scalar(_rational(m.group(1)), _imag_part(m.group(2)))
    m = _IMAG_RE.match(s)
    if m:
        return Scalar(0, _imag_part(m.group(1)))
    raise ScalarParseError(f"cannot parse scalar {text!r}")
