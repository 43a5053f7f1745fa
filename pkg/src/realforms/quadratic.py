"""Exact arithmetic in a real quadratic extension Q(sqrt(rad)).

Elements are a + b*sqrt(rad) with rational a, b and a fixed nonnegative
rational radicand. No square-free reduction is performed, so two elements
interoperate exactly when they carry the same radicand; everything a single
curve point generates under the group law stays inside its own extension.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

from .intervals import RatInterval, sqrt_lower, sqrt_upper


def is_square(v: Fraction):
    """Return sqrt(v) as a Fraction if v is a perfect rational square, else None."""
    if v < 0:
        return None
    pn, pd = v.numerator, v.denominator
    rn, rd = isqrt(pn), isqrt(pd)
    if rn * rn == pn and rd * rd == pd:
        return Fraction(rn, rd)
    return None


class QuadExt:
    """Element a + b*sqrt(rad) of Q(sqrt(rad)), rad a nonnegative rational."""

    __slots__ = ("a", "b", "rad")

    def __init__(self, a, b, rad):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.rad = Fraction(rad)
        if self.rad < 0:
            raise ValueError("radicand must be nonnegative for a real extension")
        if self.b != 0:
            root = is_square(self.rad)
            if root is not None:
                self.a += self.b * root
                self.b = Fraction(0)

    @classmethod
    def sqrt_of(cls, v) -> "QuadExt | Fraction":
        """Nonnegative square root of a rational; collapses perfect squares."""
        v = Fraction(v)
        root = is_square(v)
        if root is not None:
            return root
        return cls(0, 1, v)

    @property
    def is_rational(self) -> bool:
        return self.b == 0 or self.rad == 0

    def _check(self, other) -> "QuadExt":
        if isinstance(other, QuadExt):
            if other.is_rational:
                return QuadExt(other.rational_value(), 0, self.rad)
            if other.rad != self.rad:
                raise ValueError("mixing distinct quadratic extensions")
            return other
        return QuadExt(Fraction(other), 0, self.rad)

    def rational_value(self) -> Fraction:
        """Exact rational value; only valid when is_rational."""
        if self.b == 0 or self.rad == 0:
            return self.a
        raise ValueError(f"{self} is irrational")

    def __add__(self, other):
        if isinstance(other, QuadExt) and self.is_rational and not other.is_rational:
            return other + self.rational_value()
        other = self._check(other)
        return QuadExt(self.a + other.a, self.b + other.b, self.rad)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.rad)

    def __sub__(self, other):
        return self + (-other if isinstance(other, QuadExt) else -Fraction(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, QuadExt) and self.is_rational and not other.is_rational:
            return other * self.rational_value()
        other = self._check(other)
        return QuadExt(
            self.a * other.a + self.b * other.b * self.rad,
            self.a * other.b + self.b * other.a,
            self.rad,
        )

    __rmul__ = __mul__

    def inverse(self) -> "QuadExt":
        norm = self.a * self.a - self.b * self.b * self.rad
        if norm == 0:
            raise ZeroDivisionError("division by zero element")
        return QuadExt(self.a / norm, -self.b / norm, self.rad)

    def __truediv__(self, other):
        if not isinstance(other, QuadExt):
            other = QuadExt(Fraction(other), 0, self.rad)
        elif other.is_rational:
            other = QuadExt(other.rational_value(), 0, self.rad)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __eq__(self, other):
        if isinstance(other, QuadExt):
            if self.is_rational and other.is_rational:
                return self.rational_value() == other.rational_value()
            if self.is_rational != other.is_rational:
                return False
            if self.rad == other.rad:
                return self.a == other.a and self.b == other.b
            # Distinct radicands may still span the same field; compare via
            # b^2*rad (the irrational parts must be the same real number).
            return (
                self.a == other.a
                and self.b * self.b * self.rad == other.b * other.b * other.rad
                and (self.b > 0) == (other.b > 0)
            )
        if self.is_rational:
            return self.rational_value() == Fraction(other)
        return False

    def __hash__(self):
        if self.is_rational:
            return hash(self.rational_value())
        return hash((self.a, self.b * self.b * self.rad, self.b > 0))

    def sign(self) -> int:
        """Exact sign of the real number a + b*sqrt(rad)."""
        if self.is_rational:
            v = self.rational_value()
            return (v > 0) - (v < 0)
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sa == 0:
            return sb
        if sa == sb:
            return sa
        # Opposite signs: compare a^2 against b^2 * rad.
        lhs, rhs = self.a * self.a, self.b * self.b * self.rad
        if lhs == rhs:
            return 0
        return sa if lhs > rhs else sb

    def interval(self, bits: int) -> RatInterval:
        if self.is_rational:
            return RatInterval(self.rational_value())
        root = RatInterval(sqrt_lower(self.rad, bits), sqrt_upper(self.rad, bits))
        return root * self.b + RatInterval(self.a)

    def __repr__(self):
        if self.is_rational:
            return f"QuadExt({self.rational_value()})"
        return f"QuadExt({self.a} + {self.b}*sqrt({self.rad}))"
