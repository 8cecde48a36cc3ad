"""Exact scalar arithmetic: rationals and Gaussian rationals.

Rationals are ``gmpy2.mpq`` throughout.  Complex-valued potentials need
coefficients in Q(i); those are held in :class:`GaussianRational`.  A
Gaussian rational whose imaginary part is zero compares (and hashes)
equal to the corresponding ``mpq``, and :func:`maybe_real` demotes such
values so that purely real pipelines never pay for the complex type.

Serialized form (used in configs and JSON reports): ``"p/q"`` for
rationals, ``"(p/q)+(r/s)i"`` for Gaussian rationals.
"""

from __future__ import annotations

import re as _re
from fractions import Fraction

from gmpy2 import mpq

__all__ = [
    "mpq",
    "GaussianRational",
    "rat",
    "as_scalar",
    "maybe_real",
    "parse_scalar",
    "format_scalar",
    "scalar_to_complex",
    "scalar_conjugate",
    "is_real_scalar",
]

_RAT_TYPES = (int, mpq, Fraction)


def rat(x) -> mpq:
    """Coerce an int / string / Fraction / mpq to an exact rational."""
    if isinstance(x, mpq):
        return x
    if isinstance(x, (int, Fraction)):
        return mpq(x)
    if isinstance(x, str):
        return mpq(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


class GaussianRational:
    """An element of Q(i) with exact real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = rat(re)
        self.im = rat(im)

    # -- arithmetic ----------------------------------------------------

    @staticmethod
    def _coerce(x):
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, _RAT_TYPES):
            return GaussianRational(x)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational(
                self.re * other.re - self.im * other.im,
                self.re * other.im + self.im * other.re,
            )
        if isinstance(other, _RAT_TYPES):
            return GaussianRational(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = o.re * o.re + o.im * o.im
        if not n:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussianRational(
            (self.re * o.re + self.im * o.im) / n,
            (self.im * o.re - self.re * o.im) / n,
        )

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return (GaussianRational(1) / self) ** (-n)
        result = GaussianRational(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    # -- comparisons / protocol ----------------------------------------

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, _RAT_TYPES):
            return not self.im and self.re == other
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        return format_scalar(self)

    def __complex__(self):
        return complex(float(self.re), float(self.im))


def maybe_real(c):
    """Demote a Gaussian rational with zero imaginary part to mpq."""
    if isinstance(c, GaussianRational) and not c.im:
        return c.re
    return c


def as_scalar(x):
    """Coerce to an exact scalar (mpq or GaussianRational)."""
    if isinstance(x, mpq):
        return x
    if isinstance(x, GaussianRational):
        return maybe_real(x)
    if isinstance(x, (int, Fraction)):
        return mpq(x)
    if isinstance(x, str):
        return parse_scalar(x)
    if isinstance(x, (tuple, list)) and len(x) == 2:
        return maybe_real(GaussianRational(rat(x[0]), rat(x[1])))
    raise TypeError(f"cannot interpret {x!r} as an exact scalar")


_GAUSS_RE = _re.compile(r"^\((-?\d+(?:/\d+)?)\)\+\((-?\d+(?:/\d+)?)\)i$")


def parse_scalar(s):
    """Parse ``"p/q"`` or ``"(p/q)+(r/s)i"`` (or a two-element pair)."""
    if isinstance(s, (tuple, list)):
        return as_scalar(s)
    if not isinstance(s, str):
        return as_scalar(s)
    text = s.strip().replace(" ", "")
    m = _GAUSS_RE.match(text)
    if m:
        return maybe_real(GaussianRational(mpq(m.group(1)), mpq(m.group(2))))
    return mpq(text)


def format_scalar(c) -> str:
    """Canonical text of a scalar: ``p/q`` or ``(p/q)+(r/s)i``."""
    c = maybe_real(c)
    if isinstance(c, GaussianRational):
        return f"({c.re})+({c.im})i"
    return str(mpq(c))


def scalar_to_complex(c) -> complex:
    if isinstance(c, GaussianRational):
        return complex(c)
    return complex(float(c), 0.0)


def scalar_conjugate(c):
    if isinstance(c, GaussianRational):
        return c.conjugate()
    return c


def is_real_scalar(c) -> bool:
    return not isinstance(c, GaussianRational) or not c.im
