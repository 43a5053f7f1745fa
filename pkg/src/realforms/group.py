"""Chord-tangent group law, 2-torsion, point halving and associated points.

Three computation lanes share one set of formulas:

* rational points and points of the shape (x in Q, y = b*sqrt(v)) form an
  exactly closed class per radicand v (together with the rational 2-torsion),
  handled in Q(sqrt(v));
* a sum that leaves that class but stays quadratic over Q is returned as an
  exact AlgebraicPoint over its degree-2 minimal polynomial;
* everything else runs on rational intervals at a precision ladder, with all
  equal/inverse case decisions made on exact data wherever it exists.

Interval-only points cannot refine themselves, so any computation that chains
through them is recomputed from its exact leaves when more precision is
needed; SignUndecided propagates to the enclosing ladder.
"""

from __future__ import annotations

from fractions import Fraction

from .algebraic import AlgebraicNumber, algebraic_from_rational_coeffs, isolate_real_roots
from .curve import (
    AlgebraicPoint,
    CubicCurve,
    CurvePoint,
    IDENTITY_COMPONENT,
    InfinityPoint,
    IntervalPoint,
    QuadPoint,
    RationalPoint,
)
from .errors import InflectionPoint, NoRealAssociates, NotAllReal
from .intervals import RatInterval, SignUndecided, default_bits, refine_until
from . import intervals
from .quadratic import QuadExt

_EXACT_KINDS = (RationalPoint, QuadPoint)


def negate(P: CurvePoint) -> CurvePoint:
    return P.negate()


def point_above(curve: CubicCurve, x, sign: int = 1) -> CurvePoint:
    """The real point with rational abscissa x and the given y sign."""
    x = Fraction(x)
    fx = curve.F(x)
    if fx < 0:
        raise ValueError(f"F({x}) < 0: no real point above x")
    if fx == 0:
        return RationalPoint(curve, x, 0)
    y = QuadExt.sqrt_of(fx)
    if isinstance(y, Fraction):
        return RationalPoint(curve, x, y if sign >= 0 else -y)
    return QuadPoint(curve, x, y if sign >= 0 else -y)


def points_equal_exact(P: CurvePoint, Q: CurvePoint) -> bool:
    """Exact equality for the neutral and rational/quadratic exact points."""
    if P.is_infinity or Q.is_infinity:
        return P.is_infinity and Q.is_infinity
    if isinstance(P, _EXACT_KINDS) and isinstance(Q, _EXACT_KINDS):
        if P.x != Q.x:
            return False
        y1 = P.y if isinstance(P, QuadPoint) else QuadExt(P.y, 0, 0)
        y2 = Q.y if isinstance(Q, QuadPoint) else QuadExt(Q.y, 0, 0)
        return y1 == y2
    raise TypeError("exact equality needs rational/quadratic points")


# ---------------------------------------------------------------------------
# Case decision
# ---------------------------------------------------------------------------


def _exact_x_equal(P, Q) -> bool:
    p_alg = isinstance(P, AlgebraicPoint)
    q_alg = isinstance(Q, AlgebraicPoint)
    if p_alg != q_alg:
        return False  # algebraic abscissae here are irrational, the others rational
    if p_alg:
        return P.x.equals(Q.x)
    return P.x == Q.x


def _decide_case_exact(P, Q) -> str:
    if not _exact_x_equal(P, Q):
        return "chord"
    sp, sq = P.y_sign_value(), Q.y_sign_value()
    if sp == 0 and sq == 0:
        return "inverse"  # doubling 2-torsion gives the neutral point
    return "double" if sp == sq else "inverse"


def _decide_case_interval(P, Q, bits) -> str:
    if P.x_interval(bits).disjoint(Q.x_interval(bits)):
        return "chord"
    raise SignUndecided("abscissa intervals overlap")


# ---------------------------------------------------------------------------
# Exact lane
# ---------------------------------------------------------------------------


def _field_coords(P):
    if isinstance(P, RationalPoint):
        return P.x, P.y, None
    return P.x, P.y, P.y.rad


def _lift(value, rad):
    if isinstance(value, QuadExt):
        return value
    return QuadExt(value, 0, rad)


def _classify_exact(curve, x3: QuadExt, y3: QuadExt) -> CurvePoint:
    if x3.is_rational:
        xr = x3.rational_value()
        if y3.is_rational:
            return RationalPoint(curve, xr, y3.rational_value())
        return QuadPoint(curve, xr, y3)
    # Quadratic irrational abscissa: package as a degree-2 algebraic point.
    # The conjugate root mirrors across a, so an interval clear of a isolates.
    a, b, v = x3.a, x3.b, x3.rad
    bits = 64
    while True:
        box = x3.interval(bits)
        if not box.contains(a):
            break
        bits *= 2
    num = algebraic_from_rational_coeffs(
        [a * a - b * b * v, -2 * a, Fraction(1)], box.lo, box.hi
    )
    return AlgebraicPoint(curve, num, y3.sign())


def _add_exact(curve: CubicCurve, P, Q, case: str):
    """Exact sum, or None when the two quadratic extensions are incompatible."""
    x1, y1, r1 = _field_coords(P)
    x2, y2, r2 = _field_coords(Q)
    rads = {r for r in (r1, r2) if r is not None}
    if len(rads) > 1:
        return None
    rad = rads.pop() if rads else Fraction(0)
    x1, y1 = _lift(x1, rad), _lift(y1, rad)
    x2, y2 = _lift(x2, rad), _lift(y2, rad)

    if case == "double":
        lam = curve.F_prime(x1) / (2 * y1)
    else:
        lam = (y2 - y1) / (x2 - x1)
    x3 = lam * lam - curve.c2 - x1 - x2
    y3 = lam * (x1 - x3) - y1
    assert (y3 * y3 - curve.F(x3)) == QuadExt(0, 0, rad), "exact lane left the curve"
    return _classify_exact(curve, x3, y3)


# ---------------------------------------------------------------------------
# Interval lane
# ---------------------------------------------------------------------------


def _interval_add(curve, P, Q, case, bits) -> IntervalPoint:
    guard = bits + 32
    x1, y1 = P.x_interval(guard), P.y_interval(guard)
    if case == "double":
        lam = curve.F_prime(x1) / (2 * y1)
        x2 = x1
    else:
        x2, y2 = Q.x_interval(guard), Q.y_interval(guard)
        lam = (y2 - y1) / (x2 - x1)
    lam = lam.round_out(guard)
    x3 = (lam * lam - curve.c2 - x1 - x2).round_out(guard)
    y3 = (lam * (x1 - x3) - y1).round_out(guard)
    return IntervalPoint(curve, x3, y3)


def add(P: CurvePoint, Q: CurvePoint, bits: int | None = None) -> CurvePoint:
    """Chord-tangent sum; exact whenever the coordinate tower allows it."""
    if P.is_infinity:
        return Q
    if Q.is_infinity:
        return P
    if P.curve != Q.curve:
        raise ValueError("points on different curves")
    curve = P.curve
    target = default_bits() if bits is None else bits

    if isinstance(P, IntervalPoint) or isinstance(Q, IntervalPoint):
        # Unrefinable inputs: single shot, undecidedness propagates to the
        # caller's ladder which recomputes the whole chain from exact leaves.
        case = _decide_case_interval(P, Q, target)
        return _interval_add(curve, P, Q, case, target)

    if isinstance(P, (*_EXACT_KINDS, AlgebraicPoint)) and isinstance(
        Q, (*_EXACT_KINDS, AlgebraicPoint)
    ):
        case = _decide_case_exact(P, Q)
    else:
        case = refine_until(
            lambda b: _decide_case_interval(P, Q, b),
            start_bits=target,
            what="group-law case decision",
        )
    if case == "inverse":
        return InfinityPoint(curve)
    if isinstance(P, _EXACT_KINDS) and isinstance(Q, _EXACT_KINDS):
        result = _add_exact(curve, P, Q, case)
        if result is not None:
            return result

    width_cap = Fraction(1, 1 << target)

    def attempt(b):
        out = _interval_add(curve, P, Q, case, b)
        if out.ix.width > width_cap or out.iy.width > width_cap:
            raise SignUndecided("result interval too wide")
        return out

    return refine_until(
        attempt,
        start_bits=target,
        ceiling=max(intervals.DEFAULT_PRECISION_CEILING, 8 * target),
        what="interval point addition",
    )


def double(P: CurvePoint, bits: int | None = None) -> CurvePoint:
    return add(P, P, bits=bits)


def scalar_mul(n: int, P: CurvePoint, bits: int | None = None) -> CurvePoint:
    """[n]P by double-and-add; exact for exactly closed inputs."""
    if n < 0:
        return scalar_mul(-n, P.negate(), bits=bits)
    result: CurvePoint = InfinityPoint(P.curve)
    addend = P
    while n:
        if n & 1:
            result = add(result, addend, bits=bits)
        n >>= 1
        if n:
            addend = add(addend, addend, bits=bits)
    return result


# ---------------------------------------------------------------------------
# 2-torsion
# ---------------------------------------------------------------------------


def real_two_torsion(curve: CubicCurve, bits: int = 64):
    """All real 2-torsion points including the neutral, ascending x."""
    points: list[CurvePoint] = [InfinityPoint(curve)]
    for root in curve.real_roots(bits):
        if isinstance(root, Fraction):
            points.append(RationalPoint(curve, root, 0))
        else:
            points.append(AlgebraicPoint(curve, root, 0))
    return points


def two_torsion(curve: CubicCurve, bits: int = 64):
    """The four real 2-torsion points of a two-component curve.

    Raises NotAllReal on one-component curves, where two of the order-2
    points are complex conjugate.
    """
    if curve.component_count != 2:
        raise NotAllReal("only one real component: 2-torsion is not all real")
    return real_two_torsion(curve, bits)


# ---------------------------------------------------------------------------
# Torsion order testing
# ---------------------------------------------------------------------------

RATIONAL_TORSION_BOUND = 12  # largest torsion order of a rational point
_EXACT_CHAIN_CAP = 16


def torsion_test(curve: CubicCurve, P: CurvePoint, max_order: int = 200):
    """Least n <= max_order with [n]P = O, or None.

    Exact incremental additions decide small orders outright. For
    quadratic-exact points on a two-component curve, the real elliptic
    logarithm then proposes candidate orders up to max_order, each confirmed
    by an exact scalar multiple. A None for such points is bounded evidence
    of non-torsion, not a proof.
    """
    if P.is_infinity:
        return 1
    if isinstance(P, RationalPoint):
        cap = min(max_order, RATIONAL_TORSION_BOUND)
    elif isinstance(P, QuadPoint):
        cap = min(max_order, _EXACT_CHAIN_CAP)
    else:
        cap = max_order
    running = P
    for n in range(2, cap + 1):
        running = add(running, P)
        if running.is_infinity:
            return n
    if not isinstance(P, QuadPoint) or max_order <= cap or curve.component_count != 2:
        return None
    from .independence import torsion_order_candidates

    for n in torsion_order_candidates(curve, P, max_order):
        if n > cap and scalar_mul(n, P).is_infinity:
            return n
    return None


# ---------------------------------------------------------------------------
# Halving
# ---------------------------------------------------------------------------


def halving_quartic(curve: CubicCurve, x_s: Fraction):
    """Ascending coefficients of the quartic whose real roots are the
    abscissae of the points q with x([2]q) = x_s."""
    c2, c1, c0 = curve.c2, curve.c1, curve.c0
    return (
        c1 * c1 - 4 * c0 * c2 - 4 * x_s * c0,
        -8 * c0 - 4 * x_s * c1,
        -2 * c1 - 4 * x_s * c2,
        -4 * x_s,
        Fraction(1),
    )


def _double_y_interval(curve, q: CurvePoint, bits: int) -> RatInterval:
    x = q.x_interval(bits)
    y = q.y_interval(bits)
    lam = curve.F_prime(x) / (2 * y)
    x3 = lam * lam - curve.c2 - 2 * x
    return lam * (x - x3) - y


def _select_half_sign(curve, xi: AlgebraicNumber, S) -> int:
    """Which sign of y above the quartic root xi doubles onto S (y_S != 0)."""

    def attempt(bits):
        target = S.y_interval(bits)
        plus = _double_y_interval(curve, AlgebraicPoint(curve, xi, 1), bits)
        if plus.disjoint(target):
            return -1
        if (-plus).disjoint(target):
            return 1
        raise SignUndecided("both half signs still compatible")

    return refine_until(attempt, what="half-point sign selection")


def halve(curve: CubicCurve, S: CurvePoint, bits: int | None = None):
    """All real points q with [2]q = S, sorted by (x, y sign).

    On a two-component curve the list has length 4 when S lies on the
    identity component and length 0 when S lies on the oval.
    """
    bits = default_bits() if bits is None else bits
    if S.is_infinity:
        return real_two_torsion(curve)
    if not isinstance(S, _EXACT_KINDS):
        raise ValueError("halving needs a point with rational abscissa")
    quartic = halving_quartic(curve, S.x)
    sy = S.y_sign_value()
    results: list[CurvePoint] = []
    for xi in isolate_real_roots(quartic, bits=bits):
        if isinstance(xi, Fraction):
            f_xi = curve.F(xi)
            if f_xi < 0:
                continue
            if f_xi == 0:
                raise ArithmeticError("halving quartic hit a 2-torsion abscissa")
            if sy == 0:
                results.append(point_above(curve, xi, 1))
                results.append(point_above(curve, xi, -1))
                continue
            for sign in (1, -1):
                cand = point_above(curve, xi, sign)
                if points_equal_exact(double(cand), S):
                    results.append(cand)
                    break
            else:
                raise ArithmeticError("no sign above a rational quartic root doubles onto S")
        else:
            f_sign = refine_until(
                lambda b, xi=xi: curve.F(xi.interval(b)).sign(),
                what="sign of F at a quartic root",
            )
            if f_sign < 0:
                continue
            if sy == 0:
                results.append(AlgebraicPoint(curve, xi, 1))
                results.append(AlgebraicPoint(curve, xi, -1))
            else:
                results.append(AlgebraicPoint(curve, xi, _select_half_sign(curve, xi, S)))
    results.sort(key=lambda q: q.sort_key(bits))
    return results


# ---------------------------------------------------------------------------
# Associated points
# ---------------------------------------------------------------------------


def tangency_residual(curve: CubicCurve, q: CurvePoint, p: CurvePoint, bits: int) -> RatInterval:
    """Interval for 2*y_q*(y_p - y_q) - F'(x_q)*(x_p - x_q); it contains zero
    iff consistent with the tangent at q passing through p."""
    xq, yq = q.x_interval(bits), q.y_interval(bits)
    xp, yp = p.x_interval(bits), p.y_interval(bits)
    return 2 * yq * (yp - yq) - curve.F_prime(xq) * (xp - xq)


def associated_points(curve: CubicCurve, p: CurvePoint, bits: int | None = None):
    """The four real points q whose tangent meets the cubic again at p.

    Requires p affine, exact, not 2-torsion and not an inflection point; on a
    two-component curve a point on the compact oval has no real associated
    points and NoRealAssociates is raised.
    """
    bits = default_bits() if bits is None else bits
    if p.is_infinity:
        raise InflectionPoint("the neutral point is an inflection point")
    if not isinstance(p, _EXACT_KINDS):
        raise ValueError("associated points need a rational-abscissa input point")
    if p.y_sign_value() == 0:
        raise ValueError("input point is 2-torsion; the tangent construction needs y != 0")
    if points_equal_exact(double(p), p.negate()):
        raise InflectionPoint("input point is 3-torsion (an inflection point)")
    if curve.component_count == 2 and p.component() != IDENTITY_COMPONENT:
        raise NoRealAssociates("point on the compact oval has no real associated points")
    qs = halve(curve, p.negate(), bits=bits)
    if not qs:
        raise NoRealAssociates("no real solutions of the halving quartic")
    width_cap = Fraction(1, 1 << (bits // 2))
    for q in qs:

        def residual_ok(b, q=q):
            res = tangency_residual(curve, q, p, b)
            if not res.contains_zero():
                raise ArithmeticError("tangency residual excludes zero: halving bug")
            if res.width > width_cap:
                raise SignUndecided("tangency residual interval too wide")
            return True

        refine_until(residual_ok, start_bits=bits, what="tangency verification")
    return qs
