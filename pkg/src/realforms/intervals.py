"""Exact rational interval arithmetic with directed square-root bounds.

Ring operations on intervals with Fraction endpoints are exact; only square
roots (and optional outward rounding used to keep endpoint sizes in check)
introduce controlled slack of at most 2^-bits.
"""

from __future__ import annotations

import os
from fractions import Fraction
from math import isqrt

from .errors import PrecisionExhausted

DEFAULT_PRECISION_BITS = int(os.environ.get("REALFORMS_PRECISION_BITS", "128"))
DEFAULT_PRECISION_CEILING = 2048


def set_precision_defaults(bits=None, ceiling=None) -> None:
    """Override the process-wide precision policy (start bits, hard ceiling)."""
    global DEFAULT_PRECISION_BITS, DEFAULT_PRECISION_CEILING
    if bits is not None:
        if bits <= 0:
            raise ValueError("precision must be positive")
        DEFAULT_PRECISION_BITS = bits
    if ceiling is not None:
        if ceiling < DEFAULT_PRECISION_BITS:
            raise ValueError("ceiling below the starting precision")
        DEFAULT_PRECISION_CEILING = ceiling


def default_bits() -> int:
    return DEFAULT_PRECISION_BITS


class SignUndecided(Exception):
    """Raised when an interval straddles a value whose side must be known.

    Internal control flow only: callers refine their inputs and retry, see
    :func:`refine_until`.
    """


def sqrt_lower(v: Fraction, bits: int) -> Fraction:
    """Largest dyadic-denominator fraction t/2^bits with t/2^bits <= sqrt(v)."""
    if v < 0:
        raise ValueError("negative radicand")
    p, q = v.numerator, v.denominator
    # sqrt(p/q) = sqrt(p*q)/q; scale so the integer sqrt carries `bits` bits.
    t = isqrt(p * q * (1 << (2 * bits)))
    return Fraction(t, q << bits)


def sqrt_upper(v: Fraction, bits: int) -> Fraction:
    """Dyadic upper bound for sqrt(v), within 2^-bits of the lower bound."""
    if v < 0:
        raise ValueError("negative radicand")
    p, q = v.numerator, v.denominator
    t = isqrt(p * q * (1 << (2 * bits)))
    if t * t == p * q * (1 << (2 * bits)):
        return Fraction(t, q << bits)
    return Fraction(t + 1, q << bits)


class RatInterval:
    """Closed interval [lo, hi] with exact rational endpoints."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        lo = Fraction(lo)
        hi = lo if hi is None else Fraction(hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi

    def __repr__(self):
        return f"RatInterval({self.lo}, {self.hi})"

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __add__(self, other):
        other = _coerce(other)
        return RatInterval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self):
        return RatInterval(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        products = (
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        )
        return RatInterval(min(products), max(products))

    __rmul__ = __mul__

    def inverse(self) -> "RatInterval":
        if self.lo <= 0 <= self.hi:
            raise SignUndecided("inverting an interval containing zero")
        return RatInterval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other):
        return self * _coerce(other).inverse()

    def __rtruediv__(self, other):
        return _coerce(other) * self.inverse()

    def sqrt(self, bits: int) -> "RatInterval":
        if self.lo < 0:
            raise SignUndecided("radicand interval dips below zero")
        return RatInterval(sqrt_lower(self.lo, bits), sqrt_upper(self.hi, bits))

    def round_out(self, bits: int) -> "RatInterval":
        """Dyadic outward rounding; widens by at most 2^(1-bits)."""
        scale = 1 << bits
        lo = Fraction((self.lo * scale).__floor__(), scale)
        hi = Fraction(-((-self.hi * scale).__floor__()), scale)
        return RatInterval(lo, hi)

    def contains(self, value) -> bool:
        value = Fraction(value)
        return self.lo <= value <= self.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def contains_interval(self, other: "RatInterval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def disjoint(self, other: "RatInterval") -> bool:
        return self.hi < other.lo or other.hi < self.lo

    def overlaps(self, other: "RatInterval") -> bool:
        return not self.disjoint(other)

    def sign(self) -> int:
        """Exact sign, when decidable: -1, 0 (exactly zero), or +1."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == 0 == self.hi:
            return 0
        raise SignUndecided("interval straddles zero")

    def abs_bound(self) -> Fraction:
        return max(abs(self.lo), abs(self.hi))


def _coerce(value) -> RatInterval:
    if isinstance(value, RatInterval):
        return value
    return RatInterval(Fraction(value))


def poly_interval(coeffs, x: RatInterval) -> RatInterval:
    """Evaluate a polynomial (ascending coefficients) by Horner on intervals."""
    acc = RatInterval(0)
    for c in reversed(list(coeffs)):
        acc = acc * x + _coerce(Fraction(c))
    return acc


def refine_until(check, start_bits=None, ceiling=None, what="interval decision"):
    """Run ``check(bits)`` at doubling precisions until it stops raising
    :class:`SignUndecided`; raise :class:`PrecisionExhausted` past the ceiling.

    Deterministic: the precision ladder is fixed by (start, ceiling).
    """
    bits = DEFAULT_PRECISION_BITS if start_bits is None else start_bits
    ceiling = DEFAULT_PRECISION_CEILING if ceiling is None else ceiling
    while bits <= ceiling:
        try:
            return check(bits)
        except SignUndecided:
            bits *= 2
    raise PrecisionExhausted(f"{what}: precision ceiling {ceiling} bits reached")
