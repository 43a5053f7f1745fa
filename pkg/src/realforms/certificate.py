"""Certificate emission, replay verification and reporting.

A certificate is a single canonical JSON document: exact rationals as
"p/q" strings, algebraic numbers as defining polynomial plus isolating
interval, matrices as row-major integer arrays, and every derivation chain
recorded step by step. Identical runs produce byte-identical files; the
verifier replays each step with exact arithmetic and reports the first
failing step. Verification needs no randomness and no network.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .construct import SurfaceConfig, _match_delta, _points_distinct
from .curve import CubicCurve, point_from_dict
from .errors import ParseError, RealFormsError
from .group import halving_quartic, negate, tangency_residual, add
from .independence import IndependenceWitness, replay_witness
from .intervals import SignUndecided, refine_until
from .lattice import (
    Isometry,
    PicXVector,
    canonical_class,
    intersect,
    isometry_checks,
    phi_equivariant_on_basis,
    sigma_star,
    spectral_radius_estimate,
)
from .picgroup import collinear_triple_test
from .verifier import (
    DerivationStep,
    PairDerivation,
    bounded_conjugacy_search,
    classify_restriction,
    cocycle_check,
    coefficient_constraints,
    inequivalence_certificate,
)

SCHEMA = "realforms-certificate/1"


def dumps_canonical(document: dict) -> str:
    return json.dumps(document, indent=2, sort_keys=True) + "\n"


def build_certificate(config: SurfaceConfig, parameters: dict) -> dict:
    """Assemble the full certificate for a surface configuration: lattice
    data, restriction classes, coefficient constraints, and the per-pair
    parity derivations."""
    r = config.r
    sigmas = {i: sigma_star(i, r) for i in range(1, r + 1)}
    lattice_checks = {}
    restriction = {}
    constraints = {}
    for i, sigma in sigmas.items():
        form_ok, k_ok = isometry_checks(sigma)
        lattice_checks[str(i)] = {
            "involution": sigma.compose(sigma) == Isometry.identity(r),
            "isometry": form_ok,
            "fixes_canonical": k_ok,
            "phi_equivariant": phi_equivariant_on_basis(sigma),
            "cocycle": cocycle_check(i, r, config.all_points_real),
        }
        cls, steps = classify_restriction(sigma)
        restriction[str(i)] = {
            "class": cls.to_dict(),
            "steps": [s.to_dict() for s in steps],
        }
        constraints[str(i)] = [c.to_dict() for c in coefficient_constraints(sigma)]

    pairs = []
    for i in range(1, r + 1):
        for j in range(1, r + 1):
            if i != j:
                pairs.append(inequivalence_certificate(r, i, j).to_dict())

    document = {
        "schema": SCHEMA,
        "parameters": parameters,
        "configuration": config.to_dict(),
        "lattice": {
            "dim": 5 * r + 1,
            "canonical_self_intersection": 9 - 5 * r,
            "sigma_matrices": {str(i): sigmas[i].to_dict() for i in sigmas},
            "checks": lattice_checks,
        },
        "restriction_classes": restriction,
        "coefficient_constraints": constraints,
        "pairs": pairs,
        "verdict": {
            "r": r,
            "claim": f"at least {r} real forms",
            "status": "VERIFIED" if all(p["verdict"] == "CONTRADICTION" for p in pairs) else "INCOMPLETE",
        },
    }
    depth = parameters.get("conjugacy_depth", 0)
    if depth:
        oracle = {}
        for i in range(1, r + 1):
            for j in range(i + 1, r + 1):
                oracle[f"{i},{j}"] = bounded_conjugacy_search(r, i, j, depth).to_dict()
        document["conjugacy_oracle"] = {"depth": depth, "pairs": oracle}
    return document


def write_certificate(document: dict, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(dumps_canonical(document))


def load_certificate(path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            document = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read certificate: {exc}") from exc
    if not isinstance(document, dict) or "schema" not in document:
        raise ParseError("not a certificate document")
    return document


# ---------------------------------------------------------------------------
# Replay verification
# ---------------------------------------------------------------------------


@dataclass
class VerifyResult:
    ok: bool
    failed_step: str | None
    detail: str
    steps_run: int

    def to_dict(self):
        return {
            "ok": self.ok,
            "failed_step": self.failed_step,
            "detail": self.detail,
            "steps_run": self.steps_run,
        }


class _Replay:
    """Ordered replay; remembers reconstructed objects between steps."""

    def __init__(self, document: dict):
        self.doc = document
        self.curve = None
        self.points = None  # list of ((i, j), point)
        self.base = None
        self.associated = None
        self.deltas = None
        self.steps = []

    def run(self) -> VerifyResult:
        plan = [("schema", self.check_schema)]
        try:
            r = int(self.doc["verdict"]["r"])
        except (KeyError, TypeError, ValueError):
            return VerifyResult(False, "schema", "missing or malformed verdict.r", 0)
        self.r = r
        plan += [
            ("parameters", self.check_parameters),
            ("curve", self.check_curve),
            ("two-torsion", self.check_two_torsion),
            ("points:on-curve", self.check_points),
            ("points:distinct", self.check_distinct),
            ("points:tangency", self.check_tangency),
            ("delta-labelling", self.check_labelling),
            ("independence", self.check_independence),
            ("noncollinear", self.check_noncollinear),
        ]
        for i in range(1, r + 1):
            plan += [
                (f"matrix:{i}:isometry_checks", self.make_matrix_check(i)),
                (f"matrix:{i}:involution", self.make_involution_check(i)),
                (f"matrix:{i}:canonical-action", self.make_canonical_action_check(i)),
                (f"matrix:{i}:phi-equivariance", self.make_phi_check(i)),
                (f"cocycle:{i}", self.make_cocycle_check(i)),
                (f"restriction:{i}", self.make_restriction_check(i)),
                (f"constraints:{i}", self.make_constraints_check(i)),
            ]
        for pair in self.doc.get("pairs", []):
            plan.append((f"pair:{pair.get('i')},{pair.get('j')}", self.make_pair_check(pair)))
        if "conjugacy_oracle" in self.doc:
            plan.append(("conjugacy-oracle", self.check_conjugacy))
        plan.append(("verdict", self.check_verdict))

        for step_id, check in plan:
            try:
                check()
            except RealFormsError as exc:
                return VerifyResult(False, step_id, str(exc), len(self.steps))
            except Exception as exc:  # replay must never crash the caller
                return VerifyResult(False, step_id, f"{type(exc).__name__}: {exc}", len(self.steps))
            self.steps.append(step_id)
        return VerifyResult(True, None, "all steps replayed", len(self.steps))

    # -- individual steps --------------------------------------------------

    def check_schema(self):
        if self.doc.get("schema") != SCHEMA:
            raise ParseError(f"unsupported schema {self.doc.get('schema')!r}")

    def check_parameters(self):
        params = self.doc.get("parameters", {})
        if int(params.get("r", self.r)) != self.r:
            raise ParseError("parameters.r disagrees with verdict.r")
        if self.r < 3:
            raise ParseError("r >= 3 is a hypothesis of the construction")

    def check_curve(self):
        data = self.doc["configuration"]["curve"]
        curve = CubicCurve.from_dict(data)
        recorded = {
            "discriminant": str(curve.discriminant),
            "component_count": curve.component_count,
            "j_invariant": str(curve.j_invariant),
            "aut_gp_is_z2": curve.aut_gp_is_z2,
        }
        for key, value in recorded.items():
            if data.get(key) != value:
                raise ParseError(f"curve.{key} recorded {data.get(key)!r}, recomputed {value!r}")
        if curve.component_count != 2:
            raise ParseError("curve must have two real components")
        if not curve.aut_gp_is_z2:
            raise ParseError("curve j-invariant must avoid 0 and 1728")
        self.curve = curve

    def check_two_torsion(self):
        data = self.doc["configuration"]["deltas"]
        if len(data) != 3:
            raise ParseError("expected the three affine 2-torsion points")
        self.deltas = [point_from_dict(self.curve, d) for d in data]
        previous = None
        for delta in self.deltas:
            if delta.y_sign_value() != 0:
                raise ParseError("a recorded 2-torsion point has nonzero y")
            mid = delta.x_interval(64).mid
            if previous is not None and mid <= previous:
                raise ParseError("2-torsion points out of ascending order")
            previous = mid

    def check_points(self):
        cfg = self.doc["configuration"]
        self.base = [point_from_dict(self.curve, p) for p in cfg["base_points"]]
        if len(self.base) != self.r:
            raise ParseError("wrong number of base points")
        self.associated = {}
        for i, p in enumerate(self.base, start=1):
            if p.component() != "identity":
                raise ParseError(f"base point {i} off the identity component")
            block = cfg["associated_points"][str(i)]
            if len(block) != 4:
                raise ParseError(f"block {i} must hold 4 associated points")
            quartic = halving_quartic(self.curve, negate(p).x)
            self.associated[i] = []
            for q_data in block:
                q = point_from_dict(self.curve, q_data)
                if q_data["kind"] == "algebraic":
                    if not self._matches_quartic(q_data["x_poly"], quartic):
                        raise ParseError(
                            f"block {i}: stated defining polynomial is not the halving quartic"
                        )
                self.associated[i].append(q)
        self.points = []
        for i, p in enumerate(self.base, start=1):
            self.points.append(((i, 0), p))
            for j, q in enumerate(self.associated[i], start=1):
                self.points.append(((i, j), q))

    @staticmethod
    def _matches_quartic(stated_coeffs, quartic) -> bool:
        from math import gcd

        fracs = [Fraction(c) for c in quartic]
        denom = 1
        for f in fracs:
            denom = denom * f.denominator // gcd(denom, f.denominator)
        ints = [int(f * denom) for f in fracs]
        g = 0
        for c in ints:
            g = gcd(g, c)
        g = g or 1
        if ints[-1] < 0:
            g = -g
        ints = [c // g for c in ints]
        return [int(c) for c in stated_coeffs] == ints

    def check_distinct(self):
        bits = int(self.doc["configuration"]["precision_bits"])
        _points_distinct(self.points, bits)

    def check_tangency(self):
        bits = int(self.doc["configuration"]["precision_bits"])
        for i, p in enumerate(self.base, start=1):
            for q in self.associated[i]:

                def attempt(b, q=q, p=p):
                    res = tangency_residual(self.curve, q, p, b)
                    if not res.contains_zero():
                        raise ParseError("tangency residual excludes zero")
                    if res.width > Fraction(1, 1 << (bits // 2)):
                        raise SignUndecided("residual too wide")
                    return True

                refine_until(attempt, start_bits=bits, what="tangency replay")

    def check_labelling(self):
        bits = int(self.doc["configuration"]["precision_bits"])
        for i in range(1, self.r + 1):
            block = self.associated[i]
            p_i4 = block[3]
            for k in range(1, 4):
                diff = add(block[k - 1], negate(p_i4), bits=bits)
                matched = _match_delta(self.curve, diff, self.deltas, bits)
                if matched != k:
                    raise ParseError(
                        f"block {i}: difference {k} matches delta_{matched}, not delta_{k}"
                    )

    def check_independence(self):
        witness = IndependenceWitness.from_dict(self.doc["configuration"]["independence"])
        if not replay_witness(self.curve, self.base, witness):
            raise ParseError("independence witness failed to replay")

    def check_noncollinear(self):
        indices = [idx for idx, _ in self.points]
        for triple in combinations(indices, 3):
            if collinear_triple_test(triple, self.r):
                raise ParseError(f"symbolic collinearity for {triple}")

    # -- lattice steps -------------------------------------------------------

    def _stated_sigma(self, i: int) -> Isometry:
        data = self.doc["lattice"]["sigma_matrices"][str(i)]
        return Isometry.from_dict(data)

    def make_matrix_check(self, i):
        def check():
            form_ok, k_ok = isometry_checks(self._stated_sigma(i))
            if not form_ok:
                raise ParseError(f"matrix {i} does not preserve the intersection form")
            if not k_ok:
                raise ParseError(f"matrix {i} does not fix the canonical class")

        return check

    def make_involution_check(self, i):
        def check():
            sigma = self._stated_sigma(i)
            if sigma.compose(sigma) != Isometry.identity(self.r):
                raise ParseError(f"matrix {i} is not an involution")

        return check

    def make_canonical_action_check(self, i):
        def check():
            if self._stated_sigma(i) != sigma_star(i, self.r):
                raise ParseError(f"matrix {i} differs from the cubic-involution action")

        return check

    def make_phi_check(self, i):
        def check():
            if not phi_equivariant_on_basis(self._stated_sigma(i)):
                raise ParseError(f"matrix {i} does not commute with the curve restriction")

        return check

    def make_cocycle_check(self, i):
        def check():
            if not self.doc["configuration"].get("all_points_real", False):
                raise ParseError("configuration not flagged all-real")
            if not cocycle_check(i, self.r, True):
                raise ParseError(f"cocycle condition fails for involution {i}")

        return check

    def make_restriction_check(self, i):
        def check():
            recorded = self.doc["restriction_classes"][str(i)]
            cls, steps = classify_restriction(self._stated_sigma(i))
            if cls.to_dict() != recorded.get("class"):
                raise ParseError(f"restriction class of matrix {i} does not replay")
            fresh = [s.to_dict() for s in steps]
            if fresh != recorded.get("steps"):
                raise ParseError(f"restriction derivation of matrix {i} does not replay")

        return check

    def make_constraints_check(self, i):
        def check():
            recorded = self.doc["coefficient_constraints"][str(i)]
            fresh = [c.to_dict() for c in coefficient_constraints(self._stated_sigma(i))]
            if fresh != recorded:
                raise ParseError(f"coefficient constraints of matrix {i} do not replay")

        return check

    def make_pair_check(self, pair):
        def check():
            i, j = int(pair["i"]), int(pair["j"])
            fresh = inequivalence_certificate(self.r, i, j).to_dict()
            if fresh["verdict"] != pair.get("verdict"):
                raise ParseError(
                    f"pair ({i},{j}): verdict {pair.get('verdict')!r} does not replay"
                )
            recorded_steps = pair.get("steps", [])
            fresh_steps = fresh["steps"]
            for k, fresh_step in enumerate(fresh_steps):
                if k >= len(recorded_steps) or recorded_steps[k] != fresh_step:
                    kind = fresh_step["step_kind"]
                    raise ParseError(f"pair ({i},{j}): step {kind!r} does not replay")
            if len(recorded_steps) != len(fresh_steps):
                raise ParseError(f"pair ({i},{j}): extra recorded steps")
            if i != j and pair.get("verdict") != "CONTRADICTION":
                raise ParseError(f"pair ({i},{j}): expected a parity contradiction")

        return check

    def check_conjugacy(self):
        oracle = self.doc["conjugacy_oracle"]
        depth = int(oracle["depth"])
        for key, recorded in oracle["pairs"].items():
            i, j = (int(v) for v in key.split(","))
            fresh = bounded_conjugacy_search(self.r, i, j, depth).to_dict()
            if fresh != recorded:
                raise ParseError(f"conjugacy oracle for pair ({i},{j}) does not replay")

    def check_verdict(self):
        verdict = self.doc["verdict"]
        pairs = self.doc.get("pairs", [])
        expected = self.r * (self.r - 1)
        contradictions = sum(1 for p in pairs if p.get("verdict") == "CONTRADICTION")
        if contradictions != expected:
            raise ParseError(
                f"{contradictions} of {expected} ordered pairs reached the contradiction"
            )
        if verdict.get("status") != "VERIFIED":
            raise ParseError("verdict status is not VERIFIED")
        if verdict.get("claim") != f"at least {self.r} real forms":
            raise ParseError("verdict claim text does not match r")


def verify_certificate(document: dict) -> VerifyResult:
    """Replay every derivation and interval claim; first failure wins."""
    return _Replay(document).run()


# ---------------------------------------------------------------------------
# Report
# ---------------------------------------------------------------------------


def _approx(point_data, curve) -> str:
    point = point_from_dict(curve, point_data)
    if point.is_infinity:
        return "O (point at infinity)"
    x = float(point.x_interval(64).mid)
    y = float(point.y_interval(64).mid)
    return f"({x:.6f}, {y:.6f})"


def render_report(document: dict) -> str:
    """Human-readable summary of a certificate."""
    cfg = document["configuration"]
    curve = CubicCurve.from_dict(cfg["curve"])
    r = int(document["verdict"]["r"])
    lines = []
    lines.append(f"Certificate schema : {document['schema']}")
    lines.append(f"Configuration size : r = {r} ({5 * r} blown-up points)")
    lines.append(f"Curve              : {curve!r}")
    lines.append(f"  discriminant     = {cfg['curve']['discriminant']}")
    lines.append(f"  components       = {cfg['curve']['component_count']}")
    lines.append(f"  j-invariant      = {cfg['curve']['j_invariant']}")
    K2 = document["lattice"]["canonical_self_intersection"]
    check = intersect(canonical_class(r), canonical_class(r))
    lines.append(f"Canonical class    : K^2 = {K2} (recomputed {check})")
    lines.append(f"Independence bound : N = {cfg['independence']['bound']} "
                 f"at {cfg['independence']['precision']} bits")
    lines.append("Base points (decimal approximations; exact data in the certificate):")
    for i, p in enumerate(cfg["base_points"], start=1):
        lines.append(f"  p_{i}0 = {_approx(p, curve)}")
        for j, q in enumerate(cfg["associated_points"][str(i)], start=1):
            lines.append(f"    p_{i}{j} = {_approx(q, curve)}")
    lines.append("Pairwise verdicts:")
    for pair in document.get("pairs", []):
        lines.append(
            f"  sigma_{pair['i']} vs sigma_{pair['j']}: {pair['verdict']}"
        )
    if "conjugacy_oracle" in document:
        oracle = document["conjugacy_oracle"]
        lines.append(f"Conjugacy oracle   : depth {oracle['depth']}")
        for key, res in oracle["pairs"].items():
            lines.append(f"  pair ({key}): {res['result']} ({res.get('words_tested', 0)} words)")
    lines.append("Spectral radius diagnostics (informational):")
    for i in range(1, min(r, 3)):
        word = sigma_star(i, r).compose(sigma_star(i + 1, r))
        lines.append(
            f"  sigma_{i}*sigma_{i + 1}: ~{spectral_radius_estimate(word):.6f}"
        )
    lines.append(f"Verdict            : {document['verdict']['claim']} "
                 f"[{document['verdict']['status']}]")
    return "\n".join(lines) + "\n"
