"""Arithmetic in Q(zeta_l) for l in {1, 2, 3, 4, 6}.

These are exactly the l for which Q(zeta_l) is Q or imaginary quadratic, so an
element is a pair (a, b) meaning a + b*zeta.  For l >= 3 zeta satisfies
zeta^2 = t*zeta - 1 with t = zeta + conj(zeta) = 2cos(2pi/l).
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from .errors import UnsupportedInputError
from .linalg import to_fraction

SUPPORTED_ORDERS = (1, 2, 3, 4, 6)
_TRACE = {3: Fraction(-1), 4: Fraction(0), 6: Fraction(1)}


def zeta_trace(l: int) -> Fraction:
    if l not in SUPPORTED_ORDERS:
        raise UnsupportedInputError(f"Q(zeta_{l}) has degree > 2; supported l: {SUPPORTED_ORDERS}")
    if l <= 2:
        return Fraction(2 if l == 1 else -2)
    return _TRACE[l]


@dataclass(frozen=True)
class CyclotomicElement:
    l: int
    a: Fraction
    b: Fraction = Fraction(0)

    def __post_init__(self):
        zeta_trace(self.l)
        a, b = to_fraction(self.a), to_fraction(self.b)
        if self.l <= 2 and b != 0:
            # zeta = +-1 is rational: fold b into a
            a, b = a + (b if self.l == 1 else -b), Fraction(0)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def zeta(cls, l: int) -> "CyclotomicElement":
        if l <= 2:
            return cls(l, Fraction(1 if l == 1 else -1))
        return cls(l, Fraction(0), Fraction(1))

    def _coerce(self, other) -> "CyclotomicElement | None":
        if isinstance(other, CyclotomicElement):
            if other.l != self.l:
                raise UnsupportedInputError("mixing different cyclotomic fields")
            return other
        if isinstance(other, (int, Rational)) and not isinstance(other, bool):
            return CyclotomicElement(self.l, Fraction(other))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CyclotomicElement(self.l, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicElement(self.l, -self.a, -self.b)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CyclotomicElement(self.l, self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.l <= 2:
            return CyclotomicElement(self.l, self.a * o.a)
        t = _TRACE[self.l]
        bd = self.b * o.b
        return CyclotomicElement(self.l, self.a * o.a - bd, self.a * o.b + self.b * o.a + bd * t)

    __rmul__ = __mul__

    def conjugate(self) -> "CyclotomicElement":
        if self.l <= 2:
            return self
        return CyclotomicElement(self.l, self.a + self.b * _TRACE[self.l], -self.b)

    def norm(self) -> Fraction:
        """Field norm a^2 + t a b + b^2 = |x|^2 (a nonnegative rational)."""
        if self.l <= 2:
            return self.a * self.a
        return self.a * self.a + _TRACE[self.l] * self.a * self.b + self.b * self.b

    def real_part(self) -> Fraction:
        """Re(a + b zeta) = a + b t / 2, rational for these l."""
        if self.l <= 2:
            return self.a
        return self.a + self.b * _TRACE[self.l] / 2

    def inverse(self) -> "CyclotomicElement":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in Q(zeta)")
        c = self.conjugate()
        return CyclotomicElement(self.l, c.a / n, c.b / n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, CyclotomicElement) else other
        if o is None:
            return NotImplemented
        return self.l == o.l and self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.l, self.a, self.b))

    def __complex__(self) -> complex:
        z = cmath.exp(2j * cmath.pi / self.l)
        return float(self.a) + float(self.b) * z

    def __repr__(self):
        return f"CyclotomicElement(l={self.l}, {self.a} + {self.b}*zeta)"
