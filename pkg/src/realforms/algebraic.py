"""Certified real algebraic numbers: integer polynomial + isolating interval.

Rational roots are always split off and returned as plain Fractions, so an
AlgebraicNumber instance is an irrational root of an irreducible integer
polynomial of degree >= 2. Isolating intervals have rational endpoints and
are refined by exact-sign bisection, which is deterministic: the interval
held at a given precision does not depend on the refinement history.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

import sympy

from .intervals import RatInterval

_X = sympy.Symbol("x")


def int_poly_sign_at(coeffs, value: Fraction) -> int:
    """Exact sign of sum(coeffs[i] * value**i) using integer arithmetic only."""
    p, q = value.numerator, value.denominator
    n = len(coeffs) - 1
    acc = coeffs[n]
    qpow = 1
    for i in range(n - 1, -1, -1):
        qpow *= q
        acc = acc * p + coeffs[i] * qpow
    return (acc > 0) - (acc < 0)


def _primitive(coeffs):
    g = 0
    for c in coeffs:
        g = gcd(g, c)
    g = g or 1
    if coeffs[-1] < 0:
        g = -g
    return tuple(c // g for c in coeffs)


def _to_int_coeffs(coeffs):
    """Ascending Fraction/int coefficients -> primitive ascending int tuple."""
    fracs = [Fraction(c) for c in coeffs]
    while fracs and fracs[-1] == 0:
        fracs.pop()
    if not fracs:
        raise ValueError("zero polynomial")
    denom = 1
    for f in fracs:
        denom = denom * f.denominator // gcd(denom, f.denominator)
    ints = [int(f * denom) for f in fracs]
    return _primitive(ints)


def _sympy_poly(int_coeffs):
    return sympy.Poly(list(reversed(int_coeffs)), _X, domain="QQ")


class AlgebraicNumber:
    """Irrational real root of an irreducible integer polynomial.

    ``coeffs`` are ascending; ``(lo, hi)`` is an isolating interval with a
    strict sign change of the polynomial across it.
    """

    __slots__ = ("coeffs", "_lo", "_hi", "_sign_lo")

    def __init__(self, coeffs, lo: Fraction, hi: Fraction):
        self.coeffs = tuple(int(c) for c in coeffs)
        self._lo = Fraction(lo)
        self._hi = Fraction(hi)
        self._sign_lo = int_poly_sign_at(self.coeffs, self._lo)
        if self._sign_lo == 0 or int_poly_sign_at(self.coeffs, self._hi) != -self._sign_lo:
            raise ValueError("interval endpoints must produce a strict sign change")

    def __repr__(self):
        approx = float(self._lo + self._hi) / 2
        return f"AlgebraicNumber(~{approx:.6g}, deg {len(self.coeffs) - 1})"

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def _bisect_step(self):
        mid = (self._lo + self._hi) / 2
        s = int_poly_sign_at(self.coeffs, mid)
        if s == 0:
            raise ArithmeticError("rational root inside an irreducible isolator")
        if s == self._sign_lo:
            self._lo = mid
        else:
            self._hi = mid

    def interval(self, bits: int) -> RatInterval:
        """Isolating interval refined to width <= 2**-bits."""
        target = Fraction(1, 1 << bits)
        while self._hi - self._lo > target:
            self._bisect_step()
        return RatInterval(self._lo, self._hi)

    def refine_below(self, width: Fraction) -> RatInterval:
        while self._hi - self._lo > width:
            self._bisect_step()
        return RatInterval(self._lo, self._hi)

    def equals_fraction(self, value) -> bool:
        return False  # irrational by construction

    def compare_fraction(self, value) -> int:
        """Exact comparison with a rational: -1 if self < value, else +1."""
        value = Fraction(value)
        while self._lo <= value <= self._hi:
            self._bisect_step()
        return -1 if self._hi < value else 1

    def equals(self, other: "AlgebraicNumber") -> bool:
        """Exact equality of the two represented real numbers."""
        if self is other:
            return True
        if self.coeffs == other.coeffs:
            common = self.coeffs
        else:
            g = sympy.gcd(_sympy_poly(self.coeffs), _sympy_poly(other.coeffs))
            if g.degree() < 1:
                return False
            common = _to_int_coeffs([Fraction(c) for c in reversed(g.all_coeffs())])
        while True:
            a, b = self.interval(0), other.interval(0)
            if a.disjoint(b):
                return False
            lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
            slo = int_poly_sign_at(common, lo)
            shi = int_poly_sign_at(common, hi)
            if slo != 0 and shi != 0 and slo != shi:
                return True
            if slo == 0 or shi == 0:
                return False  # a rational root of the gcd; ours are irrational
            self._bisect_step()
            other._bisect_step()

    def to_dict(self) -> dict:
        return {
            "poly": [str(c) for c in self.coeffs],
            "interval": {"lo": str(self._lo), "hi": str(self._hi)},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AlgebraicNumber":
        coeffs = [int(c) for c in data["poly"]]
        lo = Fraction(data["interval"]["lo"])
        hi = Fraction(data["interval"]["hi"])
        return cls(coeffs, lo, hi)


def algebraic_from_rational_coeffs(coeffs, lo, hi) -> AlgebraicNumber:
    """AlgebraicNumber from rational ascending coefficients and an isolating
    interval with a strict sign change."""
    return AlgebraicNumber(_to_int_coeffs(coeffs), Fraction(lo), Fraction(hi))


def cmp_exact(u, v) -> int:
    """Exact three-way comparison of Fractions and AlgebraicNumbers."""
    if isinstance(u, Fraction) and isinstance(v, Fraction):
        return (u > v) - (u < v)
    if isinstance(u, AlgebraicNumber) and isinstance(v, Fraction):
        return u.compare_fraction(v)
    if isinstance(u, Fraction) and isinstance(v, AlgebraicNumber):
        return -v.compare_fraction(u)
    if u.equals(v):
        return 0
    while True:
        a, b = u.interval(0), v.interval(0)
        if a.disjoint(b):
            return -1 if a.hi < b.lo else 1
        u._bisect_step()
        v._bisect_step()


def isolate_real_roots(coeffs, bits: int = 32):
    """All real roots of a rational-coefficient polynomial, ascending.

    Rational roots come back as Fractions, irrational ones as
    AlgebraicNumber instances over the relevant irreducible factor, refined
    to width <= 2**-bits.
    """
    int_coeffs = _to_int_coeffs(coeffs)
    if len(int_coeffs) == 1:
        return []
    poly = _sympy_poly(int_coeffs)
    roots = []
    _, factors = poly.factor_list()
    for factor, _mult in factors:
        fc = _to_int_coeffs([Fraction(c) for c in reversed(factor.all_coeffs())])
        if len(fc) == 2:
            roots.append(Fraction(-fc[0], fc[1]))
            continue
        for lo, hi in factor.intervals(sqf=True):
            lo, hi = Fraction(lo), Fraction(hi)
            # Endpoints of an isolator for an irreducible factor of degree
            # >= 2 are never roots, so the sign change is strict.
            num = AlgebraicNumber(fc, lo, hi)
            num.interval(bits)
            roots.append(num)

    _separate(roots, bits)

    def sort_key(root):
        if isinstance(root, Fraction):
            return root
        return root.interval(0).mid

    roots.sort(key=sort_key)
    return roots


def _separate(roots, bits: int) -> None:
    """Refine algebraic roots until all boxes are pairwise disjoint and avoid
    the rational roots, making midpoint sorting exact.

    All roots produced by the isolator are distinct real numbers, so the
    refinement terminates.
    """
    algebraics = [r for r in roots if isinstance(r, AlgebraicNumber)]
    rationals = [r for r in roots if isinstance(r, Fraction)]
    for num in algebraics:
        for q in rationals:
            num.compare_fraction(q)
    while True:
        boxes = [num.interval(bits) for num in algebraics]
        clash = any(
            not boxes[i].disjoint(boxes[j])
            for i in range(len(boxes))
            for j in range(i + 1, len(boxes))
        )
        if not clash:
            return
        bits *= 2
