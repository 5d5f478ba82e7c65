"""Exact Gaussian rationals, the scalar field of every coefficient."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational


def _frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, Rational)):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    raise TypeError(f"cannot convert {v!r} to a rational")


class QI:
    """An element ``re + im*i`` of Q(i)."""

    __slots__ = ("re", "im", "_hash")

    def __init__(self, re=0, im=0):
        self.re = _frac(re)
        self.im = _frac(im)
        self._hash = None

    @classmethod
    def coerce(cls, v) -> "QI":
        if isinstance(v, QI):
            return v
        if isinstance(v, complex):
            raise TypeError("floating complex numbers are not exact")
        return cls(v)

    def conj(self) -> "QI":
        return QI(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def is_real(self) -> bool:
        return self.im == 0

    def __add__(self, other):
        try:
            o = QI.coerce(other)
        except TypeError:
            return NotImplemented
        return QI(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return QI(-self.re, -self.im)

    def __sub__(self, other):
        try:
            o = QI.coerce(other)
        except TypeError:
            return NotImplemented
        return QI(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return QI.coerce(other) - self

    def __mul__(self, other):
        try:
            o = QI.coerce(other)
        except TypeError:
            return NotImplemented
        if o.im == 0:
            return QI(self.re * o.re, self.im * o.re)
        if self.im == 0:
            return QI(self.re * o.re, self.re * o.im)
        return QI(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def inverse(self) -> "QI":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in Q(i)")
        return QI(self.re / n, -self.im / n)

    def __truediv__(self, other):
        try:
            o = QI.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return QI.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = QI(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, QI):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.re, self.im)) if self.im else hash(self.re)
        return self._hash

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"QI({self.re}, {self.im})"

    def __str__(self):
        return format_qi(self)


I = QI(0, 1)
ONE = QI(1)
ZERO = QI(0)


def format_qi(c: QI) -> str:
    """Text form used by the expression printer: ``3/2``, ``-i``, ``(1+2*i)``."""
    if c.im == 0:
        return str(c.re)
    if c.re == 0:
        if c.im == 1:
            return "i"
        if c.im == -1:
            return "-i"
        return f"{c.im}*i"
    im = c.im
    sign = "+" if im > 0 else "-"
    mag = abs(im)
    imtxt = "i" if mag == 1 else f"{mag}*i"
    return f"({c.re}{sign}{imtxt})"
