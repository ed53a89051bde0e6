"""Exact rational and Gaussian rational scalar arithmetic.

Every series coefficient in the package reduces to these types at the API
boundary.  The heavy series kernels work on raw gmpy2 integers with shared
denominators and convert to Rat / GaussRat only when a value is surfaced.
"""

from __future__ import annotations

from fractions import Fraction

import gmpy2
from gmpy2 import mpq, mpz

__all__ = ["Rat", "GaussRat", "as_real", "rat_from_str", "rat_to_str"]

_RAT_LIKE = (int, type(mpz(0)), type(mpq(0)), Fraction)


def _coerce_mpq(x) -> mpq:
    if isinstance(x, Rat):
        return x._v
    if isinstance(x, _RAT_LIKE):
        return mpq(x)
    raise TypeError(f"cannot interpret {x!r} as a rational")


class Rat:
    """Arbitrary-precision rational, always stored reduced with den > 0."""

    __slots__ = ("_v",)

    def __init__(self, num=0, den=1):
        if den == 0:
            raise ZeroDivisionError("rational with zero denominator")
        if isinstance(num, Rat):
            v = num._v / _coerce_mpq(den) if den != 1 else num._v
        else:
            v = mpq(num, den) if den != 1 else _coerce_mpq(num)
        self._v = v

    @classmethod
    def _wrap(cls, v: mpq) -> "Rat":
        r = object.__new__(cls)
        r._v = v
        return r

    @property
    def num(self):
        return self._v.numerator

    @property
    def den(self):
        return self._v.denominator

    def __add__(self, other):
        return Rat._wrap(self._v + _coerce_mpq(other))

    __radd__ = __add__

    def __sub__(self, other):
        return Rat._wrap(self._v - _coerce_mpq(other))

    def __rsub__(self, other):
        return Rat._wrap(_coerce_mpq(other) - self._v)

    def __mul__(self, other):
        return Rat._wrap(self._v * _coerce_mpq(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _coerce_mpq(other)
        if o == 0:
            raise ZeroDivisionError(f"division of {self} by zero")
        return Rat._wrap(self._v / o)

    def __rtruediv__(self, other):
        if self._v == 0:
            raise ZeroDivisionError(f"division of {other} by zero")
        return Rat._wrap(_coerce_mpq(other) / self._v)

    def __pow__(self, e: int):
        return Rat._wrap(self._v**e)

    def __neg__(self):
        return Rat._wrap(-self._v)

    def __abs__(self):
        return Rat._wrap(abs(self._v))

    def __eq__(self, other):
        try:
            return self._v == _coerce_mpq(other)
        except TypeError:
            return NotImplemented

    def __lt__(self, other):
        return self._v < _coerce_mpq(other)

    def __le__(self, other):
        return self._v <= _coerce_mpq(other)

    def __gt__(self, other):
        return self._v > _coerce_mpq(other)

    def __ge__(self, other):
        return self._v >= _coerce_mpq(other)

    def __hash__(self):
        return hash(self._v)

    def __bool__(self):
        return self._v != 0

    def is_integer(self) -> bool:
        return self._v.denominator == 1

    def __str__(self):
        return str(self._v)

    def __repr__(self):
        return f"Rat({self._v})"


def rat_to_str(x) -> str:
    """Serialize exactly as "num/den", denominator always present."""
    v = _coerce_mpq(x)
    return f"{v.numerator}/{v.denominator}"


def rat_from_str(s: str) -> Rat:
    s = s.strip()
    if "/" in s:
        num, den = s.split("/")
        return Rat(int(num), int(den))
    return Rat(int(s))


class GaussRat:
    """Gaussian rational a + b*i with exact Rat parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", re if isinstance(re, Rat) else Rat(re))
        object.__setattr__(self, "im", im if isinstance(im, Rat) else Rat(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussRat is immutable")

    @classmethod
    def i_power(cls, k: int) -> "GaussRat":
        """i**k for any integer k."""
        return (cls(1), cls(0, 1), cls(-1), cls(0, -1))[k & 3]

    def conjugate(self) -> "GaussRat":
        return GaussRat(self.re, -self.im)

    def abs2(self) -> Rat:
        return self.re * self.re + self.im * self.im

    def is_real(self) -> bool:
        return not self.im

    def __add__(self, other):
        o = self._coerce(other)
        return GaussRat(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return GaussRat(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return self._coerce(other).__sub__(self)

    def __mul__(self, other):
        o = self._coerce(other)
        if not o.im:
            return GaussRat(self.re * o.re, self.im * o.re)
        if not self.im:
            return GaussRat(self.re * o.re, self.re * o.im)
        return GaussRat(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        n2 = o.abs2()
        if not n2:
            raise ZeroDivisionError(f"division of {self} by zero")
        return self * o.conjugate() * (1 / n2)

    def __rtruediv__(self, other):
        return self._coerce(other).__truediv__(self)

    def __neg__(self):
        return GaussRat(-self.re, -self.im)

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    @staticmethod
    def _coerce(x) -> "GaussRat":
        if isinstance(x, GaussRat):
            return x
        return GaussRat(Rat(x))

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}*i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}*i"

    def __repr__(self):
        return f"GaussRat({self.re}, {self.im})"


def as_real(a) -> Rat:
    """Extract the real part of a value known to be real.

    A nonzero imaginary part means an internal inconsistency upstream, so it
    raises rather than discarding information.
    """
    if isinstance(a, Rat):
        return a
    if isinstance(a, _RAT_LIKE):
        return Rat(a)
    if isinstance(a, GaussRat):
        if a.im:
            raise ValueError(f"expected a real value, got {a}")
        return a.re
    raise TypeError(f"cannot interpret {a!r} as a scalar")
