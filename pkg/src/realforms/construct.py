"""Randomized construction of a qualifying curve and point configuration.

A cardinality argument guarantees suitable points exist but names none; this
module replaces it with seeded rejection sampling that emits replayable
evidence: a curve with two real components and 2-sided automorphism group, r
base points on the identity component that are pairwise-independent up to an
explicit relation bound, their 4r real associated points with verified
tangency, and a globally consistent 2-torsion labelling.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .curve import CubicCurve, CurvePoint, RationalPoint
from .errors import (
    CollinearTriple,
    LabellingAmbiguous,
    PrecisionExhausted,
    RepeatedPoint,
    SearchExhausted,
)
from .group import add, associated_points, negate, point_above, torsion_test
from .independence import (
    IndependenceWitness,
    RelationFound,
    elliptic_log,
    independence_witness,
    real_period,
)
from .intervals import RatInterval, SignUndecided, default_bits, refine_until
from .picgroup import collinear_triple_test

DEFAULT_RELATION_BOUND = 50
DEFAULT_TORSION_MAX_ORDER = 200
DEFAULT_ROOT_BOX = 12
DEFAULT_ATTEMPT_CAP = 400
_SNAP_DENOMINATOR = 4096


def search_curve(seed: int, box: int = DEFAULT_ROOT_BOX,
                 attempts: int = DEFAULT_ATTEMPT_CAP) -> CubicCurve:
    """Sample monic cubics with three distinct small integer roots until the
    j-invariant avoids 0 and 1728; deterministic in the seed."""
    rng = random.Random(("curve", seed).__repr__())
    for _ in range(attempts):
        roots = sorted(rng.sample(range(-box, box + 1), 3))
        curve = CubicCurve.from_roots(*roots)
        if curve.aut_gp_is_z2:
            assert curve.component_count == 2
            return curve
    raise SearchExhausted(f"no qualifying curve after {attempts} attempts")


def _log_uniform_x(curve: CubicCurve, t: float, prec: int = 64):
    """Abscissa and y-sign of the identity-component point with elliptic-log
    parameter t * period, snapped to a nearby rational abscissa."""
    a3 = curve.real_roots()[2]
    with mpmath.workprec(prec):
        omega = real_period(curve, prec)
        u = t * omega
        sign = 1
        if u > omega / 2:
            u = omega - u
            sign = -1
        if u <= 0:
            u = omega / 4
        a3f = mpmath.mpf(a3.numerator) / mpmath.mpf(a3.denominator)

        def log_at(x):
            roots = curve.real_roots()
            vals = [mpmath.mpf(v.numerator) / mpmath.mpf(v.denominator) for v in roots]
            return 2 * mpmath.elliprf(x - vals[0], x - vals[1], x - vals[2])

        hi = a3f + 1
        while log_at(hi) > u:
            hi = a3f + 2 * (hi - a3f)
        lo = a3f
        for _ in range(80):
            mid = (lo + hi) / 2
            if mid == lo or mid == hi:
                break
            if log_at(mid) > u:
                lo = mid
            else:
                hi = mid
        x_float = float((lo + hi) / 2)
    offset = Fraction(x_float) - Fraction(a3)
    snapped = Fraction(a3) + Fraction(max(float(offset), 1e-3)).limit_denominator(
        _SNAP_DENOMINATOR
    )
    if snapped <= a3:
        snapped = Fraction(a3) + Fraction(1, _SNAP_DENOMINATOR)
    return snapped, sign


@dataclass
class Rejection:
    candidate: dict
    reason: str
    detail: str

    def to_dict(self):
        return {"candidate": self.candidate, "reason": self.reason, "detail": self.detail}


def sample_base_points(
    curve: CubicCurve,
    r: int,
    seed: int,
    relation_bound: int = DEFAULT_RELATION_BOUND,
    torsion_max_order: int = DEFAULT_TORSION_MAX_ORDER,
    attempts: int = DEFAULT_ATTEMPT_CAP,
    proposed=(),
):
    """(points, witness, rejections): r identity-component points that pass
    the torsion screen and the bounded relation search.

    ``proposed`` points are tried before any random sampling (used to inject
    adversarial candidates in tests); every rejection is logged with its
    reason. Raises SearchExhausted past the attempt cap.
    """
    if curve.component_count != 2:
        raise ValueError("base-point sampling needs a two-component curve")
    rng = random.Random(("points", seed).__repr__())
    queue = list(proposed)
    points: list[CurvePoint] = []
    rejections: list[Rejection] = []
    witness = None
    spent = 0
    while len(points) < r:
        if spent >= attempts:
            raise SearchExhausted(
                f"accepted {len(points)}/{r} points after {attempts} attempts"
            )
        spent += 1
        if queue:
            candidate = queue.pop(0)
        else:
            x, sign = _log_uniform_x(curve, rng.random())
            try:
                candidate = point_above(curve, x, sign)
            except ValueError:
                continue
        summary = candidate.to_dict() if hasattr(candidate, "to_dict") else {}
        if candidate.is_infinity or candidate.component() != "identity":
            rejections.append(Rejection(summary, "component", "not on the identity component"))
            continue
        if candidate.y_sign_value() == 0:
            rejections.append(Rejection(summary, "torsion", "2-torsion point"))
            continue
        order = torsion_test(curve, candidate, max_order=torsion_max_order)
        if order is not None:
            rejections.append(Rejection(summary, "torsion", f"order {order}"))
            continue
        outcome = independence_witness(
            curve,
            points + [candidate],
            bound=relation_bound,
            torsion_max_order=torsion_max_order,
        )
        if isinstance(outcome, RelationFound):
            rejections.append(
                Rejection(summary, "relation", f"coefficients {list(outcome.coefficients)}")
            )
            continue
        points.append(candidate)
        witness = outcome
    return points, witness, rejections


# ---------------------------------------------------------------------------
# Surface assembly
# ---------------------------------------------------------------------------


@dataclass
class SurfaceConfig:
    """A full surface configuration: curve, 5r points, labelling, witness."""

    r: int
    curve: CubicCurve
    base_points: list
    associated: dict  # i -> [p_i1, p_i2, p_i3, p_i4]
    deltas: list  # [delta_1, delta_2, delta_3] as points
    witness: IndependenceWitness
    seed: int
    precision_bits: int
    all_points_real: bool = True

    def all_points(self):
        out = []
        for i, base in enumerate(self.base_points, start=1):
            out.append(((i, 0), base))
            for j, q in enumerate(self.associated[i], start=1):
                out.append(((i, j), q))
        return out

    def to_dict(self):
        return {
            "r": self.r,
            "seed": self.seed,
            "precision_bits": self.precision_bits,
            "curve": self.curve.to_dict(),
            "deltas": [d.to_dict() for d in self.deltas],
            "base_points": [p.to_dict() for p in self.base_points],
            "associated_points": {
                str(i): [q.to_dict() for q in self.associated[i]] for i in self.associated
            },
            "independence": self.witness.to_dict(),
            "all_points_real": self.all_points_real,
        }


def _match_delta(curve, diff_point, deltas, bits):
    """Index (1-based) of the 2-torsion point the interval point equals."""

    def attempt(b):
        ix = diff_point.x_interval(b)
        iy = diff_point.y_interval(b)
        if not iy.contains_zero():
            raise ArithmeticError("difference of associated points is not 2-torsion")
        hits = [
            k
            for k, delta in enumerate(deltas, start=1)
            if ix.overlaps(delta.x_interval(b))
        ]
        if len(hits) == 1:
            return hits[0]
        raise SignUndecided("difference interval overlaps several 2-torsion points")

    try:
        return refine_until(attempt, start_bits=bits, what="2-torsion matching")
    except PrecisionExhausted as exc:
        raise LabellingAmbiguous(str(exc)) from exc


def _points_distinct(all_points, bits):
    """Refine until every pair of point boxes is separated."""

    def attempt(b):
        boxes = [
            (p.x_interval(b), p.y_interval(b), idx) for idx, p in all_points
        ]
        for s in range(len(boxes)):
            for t in range(s + 1, len(boxes)):
                bx, by, bi = boxes[s]
                cx, cy, ci = boxes[t]
                if bx.overlaps(cx) and by.overlaps(cy):
                    raise SignUndecided(f"points {bi} and {ci} not separated")
        return True

    try:
        return refine_until(attempt, start_bits=bits, what="point distinctness")
    except PrecisionExhausted as exc:
        raise RepeatedPoint(str(exc)) from exc


def _collinearity_det(points, bits):
    (xa, ya), (xb, yb), (xc, yc) = (
        (p.x_interval(bits), p.y_interval(bits)) for p in points
    )
    return (xb - xa) * (yc - ya) - (xc - xa) * (yb - ya)


def _check_noncollinear_numeric(labelled, triples, bits):
    for triple in triples:
        pts = [p for idx, p in labelled if idx in triple]

        def attempt(b, pts=pts):
            det = _collinearity_det(pts, b)
            try:
                if det.sign() != 0:
                    return True
            except SignUndecided:
                raise
            raise ArithmeticError("exactly collinear triple")

        try:
            refine_until(attempt, start_bits=bits, what="collinearity determinant")
        except PrecisionExhausted as exc:
            raise CollinearTriple(f"triple {triple} unresolved: {exc}") from exc
        except ArithmeticError as exc:
            raise CollinearTriple(f"triple {triple}: {exc}") from exc


def build_surface(
    curve: CubicCurve,
    base_points,
    r: int,
    witness: IndependenceWitness,
    seed: int = 0,
    bits: int | None = None,
    numeric_collinearity_sample: int = 300,
) -> SurfaceConfig:
    """Compute associated points, fix the canonical 2-torsion labelling,
    order each block accordingly, and run the distinctness and
    non-collinearity checks.
    """
    bits = default_bits() if bits is None else bits
    if len(base_points) != r:
        raise ValueError("need exactly r base points")
    roots = curve.real_roots()
    deltas = [
        RationalPoint(curve, root, 0)
        if isinstance(root, Fraction)
        else _algebraic_two_torsion(curve, root)
        for root in roots
    ]
    associated = {}
    for i, p in enumerate(base_points, start=1):
        qs = associated_points(curve, p, bits=bits)
        if len(qs) != 4:
            raise ArithmeticError(f"expected 4 real associated points, got {len(qs)}")
        p_i4 = qs[0]
        rest = qs[1:]
        ordered = [None, None, None]
        for q in rest:
            diff = add(q, negate(p_i4), bits=bits)
            k = _match_delta(curve, diff, deltas, bits)
            if ordered[k - 1] is not None:
                raise LabellingAmbiguous(f"two differences matched delta_{k}")
            ordered[k - 1] = q
        if any(q is None for q in ordered):
            raise LabellingAmbiguous("associated differences missed a 2-torsion point")
        associated[i] = [*ordered, p_i4]

    config = SurfaceConfig(
        r=r,
        curve=curve,
        base_points=list(base_points),
        associated=associated,
        deltas=deltas,
        witness=witness,
        seed=seed,
        precision_bits=bits,
    )
    labelled = config.all_points()
    _points_distinct(labelled, bits)

    indices = [idx for idx, _ in labelled]
    from itertools import combinations

    all_triples = list(combinations(indices, 3))
    for triple in all_triples:
        if collinear_triple_test(triple, r):
            raise CollinearTriple(f"symbolic collinearity for {triple}")
    if r <= 4:
        numeric_triples = all_triples
    else:
        rng = random.Random(("collinearity", seed).__repr__())
        numeric_triples = rng.sample(all_triples, min(numeric_collinearity_sample, len(all_triples)))
    _check_noncollinear_numeric(labelled, numeric_triples, bits)
    return config


def _algebraic_two_torsion(curve, root):
    from .curve import AlgebraicPoint

    return AlgebraicPoint(curve, root, 0)
