"""Real Weierstrass cubics y^2 = x^3 + c2 x^2 + c1 x + c0 and their points.

Coefficients are exact rationals. Points come in four flavours: the neutral
point at infinity, rational points, points with rational x and quadratic
irrational y, and fully algebraic points (x an isolated quartic root, y a
signed square root of F(x)). The latter two are still exact objects; interval
data is derived from them on demand at any precision.
"""

from __future__ import annotations

from fractions import Fraction

from .algebraic import AlgebraicNumber, cmp_exact, isolate_real_roots
from .errors import ZeroDiscriminant
from .intervals import RatInterval, SignUndecided, refine_until
from .quadratic import QuadExt

IDENTITY_COMPONENT = "identity"
OVAL_COMPONENT = "oval"


class CubicCurve:
    """Smooth plane cubic in the dehomogenized form y^2 = F(x)."""

    def __init__(self, c2, c1, c0):
        self.c2 = Fraction(c2)
        self.c1 = Fraction(c1)
        self.c0 = Fraction(c0)
        if self.disc_cubic == 0:
            raise ZeroDiscriminant(f"singular cubic: F = x^3 + {c2}x^2 + {c1}x + {c0}")
        self._roots = None

    @classmethod
    def from_roots(cls, a1, a2, a3) -> "CubicCurve":
        """Curve y^2 = (x - a1)(x - a2)(x - a3)."""
        a1, a2, a3 = Fraction(a1), Fraction(a2), Fraction(a3)
        return cls(-(a1 + a2 + a3), a1 * a2 + a1 * a3 + a2 * a3, -a1 * a2 * a3)

    # -- invariants ----------------------------------------------------

    @property
    def disc_cubic(self) -> Fraction:
        c2, c1, c0 = self.c2, self.c1, self.c0
        return (
            18 * c2 * c1 * c0
            - 4 * c2**3 * c0
            + c2**2 * c1**2
            - 4 * c1**3
            - 27 * c0**2
        )

    @property
    def discriminant(self) -> Fraction:
        return 16 * self.disc_cubic

    @property
    def c4(self) -> Fraction:
        return 16 * self.c2**2 - 48 * self.c1

    @property
    def c6(self) -> Fraction:
        return -64 * self.c2**3 + 288 * self.c2 * self.c1 - 864 * self.c0

    @property
    def j_invariant(self) -> Fraction:
        return self.c4**3 / self.discriminant

    @property
    def component_count(self) -> int:
        # Three distinct real roots of the monic cubic <=> positive discriminant.
        return 2 if self.disc_cubic > 0 else 1

    @property
    def aut_gp_is_z2(self) -> bool:
        # j not in {0, 1728} <=> c4 != 0 and c6 != 0.  External criterion for
        # the group-automorphism group being {1, -1}.
        return self.c4 != 0 and self.c6 != 0

    # -- evaluation ----------------------------------------------------

    def F(self, x):
        return ((x + self.c2) * x + self.c1) * x + self.c0

    def F_prime(self, x):
        return (3 * x + 2 * self.c2) * x + self.c1

    def f_coeffs(self):
        return (self.c0, self.c1, self.c2, Fraction(1))

    # -- real roots and components --------------------------------------

    def real_roots(self, bits: int = 64):
        """Real roots of F, ascending; Fractions where rational."""
        if self._roots is None:
            self._roots = isolate_real_roots(self.f_coeffs(), bits=bits)
        return self._roots

    @property
    def rational_roots(self):
        roots = self.real_roots()
        if len(roots) == 3 and all(isinstance(r, Fraction) for r in roots):
            return roots
        return None

    def component_of_x(self, x) -> str:
        """Component of a real curve point with exact x coordinate."""
        if self.component_count == 1:
            return IDENTITY_COMPONENT
        roots = self.real_roots()
        if cmp_exact(x, roots[2]) >= 0:
            return IDENTITY_COMPONENT
        if cmp_exact(x, roots[1]) <= 0 and cmp_exact(x, roots[0]) >= 0:
            return OVAL_COMPONENT
        raise ValueError(f"x = {x} is not the abscissa of a real point")

    # -- misc ------------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, CubicCurve)
            and (self.c2, self.c1, self.c0) == (other.c2, other.c1, other.c0)
        )

    def __hash__(self):
        return hash((self.c2, self.c1, self.c0))

    def __repr__(self):
        return f"CubicCurve(y^2 = x^3 + {self.c2}*x^2 + {self.c1}*x + {self.c0})"

    def to_dict(self) -> dict:
        return {
            "coefficients": {"c2": str(self.c2), "c1": str(self.c1), "c0": str(self.c0)},
            "discriminant": str(self.discriminant),
            "component_count": self.component_count,
            "j_invariant": str(self.j_invariant),
            "aut_gp_is_z2": self.aut_gp_is_z2,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CubicCurve":
        coeffs = data["coefficients"]
        return cls(Fraction(coeffs["c2"]), Fraction(coeffs["c1"]), Fraction(coeffs["c0"]))


def curve_properties(curve: CubicCurve):
    """(discriminant, component_count, j_invariant, aut_gp_is_Z2), all exact."""
    return (
        curve.discriminant,
        curve.component_count,
        curve.j_invariant,
        curve.aut_gp_is_z2,
    )


# ---------------------------------------------------------------------------
# Points
# ---------------------------------------------------------------------------


class CurvePoint:
    """Common interface of all point flavours."""

    is_infinity = False
    curve: CubicCurve

    def negate(self) -> "CurvePoint":
        raise NotImplementedError

    def x_interval(self, bits: int) -> RatInterval:
        raise NotImplementedError

    def y_interval(self, bits: int) -> RatInterval:
        raise NotImplementedError

    def component(self) -> str:
        raise NotImplementedError

    def sort_key(self, bits: int = 64):
        """(x midpoint, y sign) for the deterministic point ordering."""
        return (self.x_interval(bits).mid, self.y_sign_value())

    def y_sign_value(self) -> int:
        raise NotImplementedError


class InfinityPoint(CurvePoint):
    """The neutral point [0:1:0], an inflection point of the cubic."""

    is_infinity = True

    def __init__(self, curve: CubicCurve):
        self.curve = curve

    def negate(self):
        return self

    def component(self):
        return IDENTITY_COMPONENT

    def __eq__(self, other):
        return isinstance(other, InfinityPoint) and other.curve == self.curve

    def __hash__(self):
        return hash(("infinity", self.curve))

    def __repr__(self):
        return "InfinityPoint()"

    def to_dict(self):
        return {"kind": "infinity"}


class RationalPoint(CurvePoint):
    """Affine point with exact rational coordinates."""

    def __init__(self, curve: CubicCurve, x, y):
        self.curve = curve
        self.x = Fraction(x)
        self.y = Fraction(y)
        if self.y * self.y != curve.F(self.x):
            raise ValueError(f"({x}, {y}) is not on {curve}")

    def negate(self):
        return RationalPoint(self.curve, self.x, -self.y)

    def x_interval(self, bits):
        return RatInterval(self.x)

    def y_interval(self, bits):
        return RatInterval(self.y)

    def component(self):
        return self.curve.component_of_x(self.x)

    def y_sign_value(self):
        return (self.y > 0) - (self.y < 0)

    def __eq__(self, other):
        return (
            isinstance(other, RationalPoint)
            and (self.x, self.y) == (other.x, other.y)
            and self.curve == other.curve
        )

    def __hash__(self):
        return hash((self.x, self.y))

    def __repr__(self):
        return f"RationalPoint({self.x}, {self.y})"

    def to_dict(self):
        return {"kind": "rational", "x": str(self.x), "y": str(self.y)}


class QuadPoint(CurvePoint):
    """Affine point with rational x and irrational quadratic y = c*sqrt(v)."""

    def __init__(self, curve: CubicCurve, x, y: QuadExt):
        self.curve = curve
        self.x = Fraction(x)
        if not isinstance(y, QuadExt) or y.is_rational:
            raise ValueError("QuadPoint needs an irrational quadratic y")
        self.y = y
        if (y * y).rational_value() != curve.F(self.x):
            raise ValueError(f"({x}, {y}) is not on {curve}")

    @classmethod
    def on_identity_x(cls, curve: CubicCurve, x, sign: int = 1) -> "CurvePoint":
        """Point above a rational abscissa; collapses to RationalPoint when
        F(x) is a perfect square."""
        x = Fraction(x)
        fx = curve.F(x)
        if fx < 0:
            raise ValueError(f"F({x}) < 0: no real point")
        y = QuadExt.sqrt_of(fx)
        if isinstance(y, Fraction):
            return RationalPoint(curve, x, y if sign >= 0 else -y)
        return cls(curve, x, y if sign >= 0 else -y)

    def negate(self):
        return QuadPoint(self.curve, self.x, -self.y)

    def x_interval(self, bits):
        return RatInterval(self.x)

    def y_interval(self, bits):
        return self.y.interval(bits)

    def component(self):
        return self.curve.component_of_x(self.x)

    def y_sign_value(self):
        return self.y.sign()

    def __eq__(self, other):
        return (
            isinstance(other, QuadPoint)
            and self.curve == other.curve
            and self.x == other.x
            and self.y == other.y
        )

    def __hash__(self):
        return hash((self.x, self.y))

    def __repr__(self):
        return f"QuadPoint({self.x}, {self.y})"

    def to_dict(self):
        fx = self.curve.F(self.x)
        return {
            "kind": "quadratic",
            "x": str(self.x),
            "y_sign": self.y.sign(),
            "y_poly": [str(-fx), "0", "1"],
            "y": {"a": str(self.y.a), "b": str(self.y.b), "rad": str(self.y.rad)},
        }


class AlgebraicPoint(CurvePoint):
    """Affine point with certified algebraic x and y = y_sign * sqrt(F(x))."""

    def __init__(self, curve: CubicCurve, x: AlgebraicNumber, y_sign: int):
        if y_sign not in (-1, 0, 1):
            raise ValueError("y_sign must be -1, 0 or +1")
        self.curve = curve
        self.x = x
        self.ysign = y_sign

    def negate(self):
        return AlgebraicPoint(self.curve, self.x, -self.ysign)

    def x_interval(self, bits):
        return self.x.interval(bits)

    def y_interval(self, bits):
        if self.ysign == 0:
            return RatInterval(0)

        def attempt(b):
            fx = self.curve.F(self.x.interval(b))
            return self.ysign * fx.sqrt(b)

        return refine_until(attempt, start_bits=bits, ceiling=max(bits * 16, 4096),
                            what="square root of F(x)")

    def component(self):
        return self.curve.component_of_x(self.x)

    def y_sign_value(self):
        return self.ysign

    def residual_interval(self, bits: int) -> RatInterval:
        """Interval for y^2 - F(x); contains zero for a genuine curve point."""
        ix = self.x.interval(bits)
        fx = self.curve.F(ix)
        if self.ysign == 0:
            return -fx
        ysq = self.y_interval(bits)
        ysq = ysq * ysq
        return ysq - fx

    def __repr__(self):
        mid = float(self.x.interval(32).mid)
        return f"AlgebraicPoint(x~{mid:.6g}, ysign={self.ysign})"

    def to_dict(self):
        data = self.x.to_dict()
        return {
            "kind": "algebraic",
            "x_poly": data["poly"],
            "x_interval": data["interval"],
            "y_sign": self.ysign,
        }


class IntervalPoint(CurvePoint):
    """Transient interval-only point produced by the interval group-law lane."""

    def __init__(self, curve: CubicCurve, ix: RatInterval, iy: RatInterval):
        self.curve = curve
        self.ix = ix
        self.iy = iy

    def negate(self):
        return IntervalPoint(self.curve, self.ix, -self.iy)

    def x_interval(self, bits):
        return self.ix

    def y_interval(self, bits):
        return self.iy

    def component(self):
        if self.curve.component_count == 1:
            return IDENTITY_COMPONENT
        roots = self.curve.real_roots()
        boxes = [
            RatInterval(r) if isinstance(r, Fraction) else r.interval(64) for r in roots
        ]
        if self.ix.lo > boxes[2].hi or self.ix.contains_interval(boxes[2]):
            return IDENTITY_COMPONENT
        if self.ix.hi < boxes[1].lo or (self.ix.lo > boxes[0].hi and self.ix.hi < boxes[2].lo):
            return OVAL_COMPONENT
        raise SignUndecided("interval point straddles a component boundary")

    def y_sign_value(self):
        try:
            return self.iy.sign()
        except SignUndecided:
            return 0

    def __repr__(self):
        return f"IntervalPoint(x~{float(self.ix.mid):.6g}, y~{float(self.iy.mid):.6g})"


def point_from_dict(curve: CubicCurve, data: dict) -> CurvePoint:
    kind = data["kind"]
    if kind == "infinity":
        return InfinityPoint(curve)
    if kind == "rational":
        return RationalPoint(curve, Fraction(data["x"]), Fraction(data["y"]))
    if kind == "quadratic":
        y = data["y"]
        return QuadPoint(
            curve,
            Fraction(data["x"]),
            QuadExt(Fraction(y["a"]), Fraction(y["b"]), Fraction(y["rad"])),
        )
    if kind == "algebraic":
        x = AlgebraicNumber.from_dict({"poly": data["x_poly"], "interval": data["x_interval"]})
        return AlgebraicPoint(curve, x, int(data["y_sign"]))
    raise ValueError(f"unknown point kind {kind!r}")
