"""Mechanical replay of the arithmetic that separates the lifted involutions.

Pipeline, for a candidate lattice map G that is an isometry fixing the
canonical class:

1. classify its restriction to the cubic: solve for (a, B) with
   phi(G e) = a * phi(e) + deg(phi(e)) * B, replaying the three quadratic
   eliminations that force the free part of B to vanish and the intersection
   argument that forces a = 1;
2. check the coefficient constraints any such map must satisfy;
3. derive, symbolically over the letters of an arbitrary automorphism, the
   congruence 1 = 0 (mod 2) from the assumption that two distinct involution
   actions are conjugate - the parity obstruction.

A bounded brute-force conjugacy search over words in the involution actions
provides an independent desk-scale oracle for step 3.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ConstraintViolated,
    InconsistentPipeline,
    NonRealConfiguration,
    NotPhiCompatible,
    UnexpectedSolution,
)
from .lattice import (
    Isometry,
    PicXVector,
    anticanonical_class,
    basis_index,
    dim,
    index_pairs,
    intersect,
    isometry_checks,
    phi,
    reduced_words,
    sigma_star,
)
from .picgroup import PicCElement, encode_3p0, encode_point


@dataclass(frozen=True)
class DerivationStep:
    """One checked step of a derivation chain; replayable and JSON-safe."""

    step_kind: str
    rule: str
    inputs: dict
    outputs: dict

    def to_dict(self):
        return {
            "step_kind": self.step_kind,
            "rule": self.rule,
            "inputs": self.inputs,
            "outputs": self.outputs,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            step_kind=data["step_kind"],
            rule=data["rule"],
            inputs=data["inputs"],
            outputs=data["outputs"],
        )


# ---------------------------------------------------------------------------
# Diophantine eliminations
# ---------------------------------------------------------------------------

_EQUATIONS = {
    # x * (alpha * a + beta * x) = 0 with the coefficients below.
    "m": lambda r: (2 * (3 - r), 9 - 5 * r),
    "n1": lambda r: (-4 * (r - 2), 9 - 5 * r),
    "ns": lambda r: (4, 5 * r - 9),
}


@dataclass(frozen=True)
class DiophantineResult:
    which: str
    r: int
    a: int
    alpha: int
    beta: int
    solutions: tuple
    bound_note: str

    def to_dict(self):
        return {
            "which": self.which,
            "r": self.r,
            "a": self.a,
            "alpha": self.alpha,
            "beta": self.beta,
            "solutions": list(self.solutions),
            "bound_note": self.bound_note,
        }


def diophantine_solve(which: str, r: int, a: int) -> DiophantineResult:
    """Exact integer solution set of one elimination equation; must be {0}.

    The equation is x*(alpha*a + beta*x) = 0. A nonzero solution would need
    beta to divide alpha*a, impossible for r >= 3 because 0 < |alpha/beta| <
    1 there; UnexpectedSolution guards that reasoning against typos.
    """
    if r < 3:
        raise ValueError("the elimination equations assume r >= 3")
    if a not in (1, -1):
        raise ValueError("a must be +1 or -1")
    if which not in _EQUATIONS:
        raise ValueError(f"unknown equation {which!r}")
    alpha, beta = _EQUATIONS[which](r)
    solutions = {0}
    if alpha * a % beta == 0:
        extra = -(alpha * a) // beta
        solutions.add(extra)
    if solutions != {0}:
        raise UnexpectedSolution(
            f"equation {which} for r={r}, a={a} has solutions {sorted(solutions)}"
        )
    note = (
        f"nonzero root would be |x| = {abs(alpha)}/{abs(beta)}, "
        "strictly between 0 and 1 for r >= 4 and 0 at r = 3"
        if which == "m"
        else f"nonzero root would be |x| = {abs(alpha)}/{abs(beta)}, strictly between 0 and 1"
    )
    return DiophantineResult(which, r, a, alpha, beta, (0,), note)


def enumerate_solutions(which: str, r: int, a: int, limit: int = 10**6):
    """Brute-force oracle: all |x| <= limit with x*(alpha*a + beta*x) = 0."""
    alpha, beta = _EQUATIONS[which](r)
    xs = np.arange(-limit, limit + 1, dtype=np.int64)
    values = xs * (alpha * a + beta * xs)
    return sorted(int(x) for x in xs[values == 0])


# ---------------------------------------------------------------------------
# Restriction classification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RestrictionClass:
    """Restriction of an automorphism to the cubic: p -> a*p + B with B
    2-torsion (B = s1*delta_1 + s2*delta_2)."""

    a: int
    s1: int
    s2: int

    def to_dict(self):
        return {"a": self.a, "B": [self.s1, self.s2]}


def _paper_vector_v(r: int):
    v = [0] * dim(r)
    v[0] = 1
    for i in range(1, r + 1):
        v[basis_index(i, 0, r)] = 1
    return tuple(v)


def _paper_vector_w(r: int):
    w = [0] * dim(r)
    w[0] = 2
    for j in range(1, 5):
        w[basis_index(1, j, r)] = 1
    for i in range(2, r + 1):
        w[basis_index(i, 0, r)] = 2
    return tuple(w)


def _paper_vector_u(s: int, r: int):
    u = [0] * dim(r)
    u[basis_index(s, 0, r)] = -2
    for j in range(1, 5):
        u[basis_index(s, j, r)] = 1
    return tuple(u)


def _solve_restriction_system(G: Isometry):
    """All pairs (a, B) consistent with the phi-images of the basis."""
    r = G.r
    line_image = phi(G.apply(PicXVector.line(r)))
    images = {
        (k, l): phi(G.apply(PicXVector.exceptional(k, l, r))) for k, l in index_pairs(r)
    }
    solutions = []
    for a in (1, -1):
        base = encode_point(1, 0, r).scale(a)
        B = images[(1, 0)] + base.scale(-1)
        ok = all(
            images[(k, l)] == encode_point(k, l, r).scale(a) + B
            for k, l in index_pairs(r)
        )
        ok = ok and line_image == encode_3p0(r).scale(a) + B.scale(3)
        if ok:
            solutions.append((a, B))
    return solutions


def classify_restriction(G: Isometry, r: int | None = None):
    """(RestrictionClass, derivation steps) for an isometry fixing K.

    Fails loudly: NotPhiCompatible when no (a, B) matches the images,
    InconsistentPipeline when an internal replay step disagrees.
    """
    r = G.r if r is None else r
    if r != G.r:
        raise ValueError("rank mismatch")
    steps = []
    form_ok, k_ok = isometry_checks(G)
    steps.append(
        DerivationStep(
            "isometry-precondition",
            "intersection-form-and-canonical-class",
            {"r": r},
            {"preserves_form": form_ok, "fixes_canonical": k_ok},
        )
    )
    if not (form_ok and k_ok):
        raise NotPhiCompatible("matrix is not an isometry fixing the canonical class")

    solutions = _solve_restriction_system(G)
    if not solutions:
        raise NotPhiCompatible("no (a, B) matches the phi-images of the basis")
    if len(solutions) > 1:
        raise InconsistentPipeline("both signs of a match: degenerate system")
    a, B = solutions[0]
    steps.append(
        DerivationStep(
            "restriction-system",
            "phi-image-match",
            {"r": r},
            {"a": a, "B": B.to_list()},
        )
    )

    # The three quadratic eliminations force the free part of B to vanish.
    vectors = {"m": _paper_vector_v(r), "n1": _paper_vector_w(r)}
    values = {"m": B.m, "n1": B.n[0]}
    for s in range(2, r + 1):
        vectors[f"ns:{s}"] = _paper_vector_u(s, r)
        values[f"ns:{s}"] = B.n[s - 1]
    for key, vec in vectors.items():
        which = key.split(":")[0]
        coeff = values[key]
        paper = G.paper_matrix
        dots = tuple(
            sum(vec[k] * paper[k][col] for k in range(dim(r))) for col in range(dim(r))
        )
        lhs = vec[0] ** 2 - sum(x * x for x in vec[1:])
        rhs = dots[0] ** 2 - sum(x * x for x in dots[1:])
        if lhs != rhs:
            raise InconsistentPipeline(f"quadratic identity failed for {key}")
        alpha, beta = _EQUATIONS[which](r)
        if coeff * (alpha * a + beta * coeff) != 0:
            raise InconsistentPipeline(f"elimination equation violated for {key}")
        allowed = diophantine_solve(which, r, a).solutions
        if coeff not in allowed:
            raise InconsistentPipeline(f"{key}: value {coeff} outside solution set")
        steps.append(
            DerivationStep(
                f"elimination-{key}",
                "quadratic-form-identity",
                {"vector_selfintersection": lhs, "a": a},
                {"dots_value": rhs, "forced_coefficient": coeff},
            )
        )
    if B.m != 0 or any(B.n):
        raise InconsistentPipeline("free part of B did not vanish")

    # a-determination: 3*n_10 - sum e^10_ij equals a by the system and equals
    # the intersection of the anticanonical class with the image of E_10.
    t = 3 * G.n_coeff(1, 0) - sum(G.e_coeff(i, j, 1, 0) for i, j in index_pairs(r))
    pairing = intersect(anticanonical_class(r), G.apply(PicXVector.exceptional(1, 0, r)))
    if t != pairing:
        raise InconsistentPipeline("letter sum disagrees with the intersection pairing")
    if t != a:
        raise InconsistentPipeline("a-determination disagrees with the system solution")
    if t != 1:
        raise InconsistentPipeline("anticanonical pairing forces a = 1; got " + str(t))
    steps.append(
        DerivationStep(
            "a-determination",
            "anticanonical-pairing",
            {"letter_sum": t, "pairing": pairing},
            {"a": 1},
        )
    )
    return RestrictionClass(a=1, s1=B.s1, s2=B.s2), steps


# ---------------------------------------------------------------------------
# Coefficient constraints
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConstraintCheck:
    i: int
    j: int
    lhs: int
    rhs: int

    @property
    def ok(self):
        return self.lhs == self.rhs

    def to_dict(self):
        return {"i": self.i, "j": self.j, "lhs": self.lhs, "rhs": self.rhs}


def evaluate_coefficient_constraints(G: Isometry):
    """Evaluate all 4r instances of 2*e^i0_ij - 1 = e^i1_ij + ... + e^i4_ij
    on the letters of G, raising ConstraintViolated on the first failure."""
    checks = []
    for i in range(1, G.r + 1):
        for j in range(1, 5):
            lhs = 2 * G.e_coeff(i, j, i, 0) - 1
            rhs = sum(G.e_coeff(i, j, i, t) for t in range(1, 5))
            check = ConstraintCheck(i=i, j=j, lhs=lhs, rhs=rhs)
            if not check.ok:
                raise ConstraintViolated(f"instance (i={i}, j={j}): {lhs} != {rhs}")
            checks.append(check)
    return checks


def coefficient_constraints(G: Isometry, r: int | None = None):
    """The checked constraint instances for an isometry whose restriction to
    the cubic is the identity or a 2-torsion translation (established by
    classify_restriction first; the derivation works with the inverse matrix
    Q G^T Q). Raises ConstraintViolated if any instance fails."""
    r = G.r if r is None else r
    cls, _ = classify_restriction(G, r)
    if cls.a != 1:
        raise ConstraintViolated("constraints assume a = 1")
    return evaluate_coefficient_constraints(G)


# ---------------------------------------------------------------------------
# Symbolic linear expressions over automorphism letters
# ---------------------------------------------------------------------------


class LinExpr:
    """Integer linear combination of named letters plus a constant."""

    __slots__ = ("coeffs", "const")

    def __init__(self, coeffs=None, const=0):
        self.coeffs = {k: v for k, v in (coeffs or {}).items() if v}
        self.const = const

    @classmethod
    def symbol(cls, name, coeff=1):
        return cls({name: coeff})

    def __add__(self, other):
        if isinstance(other, int):
            return LinExpr(self.coeffs, self.const + other)
        merged = dict(self.coeffs)
        for k, v in other.coeffs.items():
            merged[k] = merged.get(k, 0) + v
        return LinExpr(merged, self.const + other.const)

    def __sub__(self, other):
        return self + other.scale(-1) if isinstance(other, LinExpr) else self + (-other)

    def scale(self, k):
        return LinExpr({name: k * v for name, v in self.coeffs.items()}, k * self.const)

    def __eq__(self, other):
        return (
            isinstance(other, LinExpr)
            and self.coeffs == other.coeffs
            and self.const == other.const
        )

    def render(self) -> str:
        parts = []
        for name in sorted(self.coeffs):
            parts.append(f"{self.coeffs[name]:+d}*{name}")
        if self.const or not parts:
            parts.append(f"{self.const:+d}")
        return " ".join(parts)

    def parity_contradiction(self) -> bool:
        """True iff expr = 0 is impossible mod 2: even letters, odd constant."""
        return all(c % 2 == 0 for c in self.coeffs.values()) and self.const % 2 == 1


def _symbolic_alpha_image(concrete: PicXVector, r: int):
    """Coordinates of alpha applied to a concrete class, over alpha's letters.

    alpha(L) = d*L - sum m_uv E_uv and alpha(E_uv) = n_uv*L - sum e^uv E_cd,
    so on coordinate vectors the column for L is (d, m_uv) and the column for
    E_uv is -(n_uv, e^uv_cd).
    """
    n = dim(r)
    out = [LinExpr() for _ in range(n)]
    d0 = concrete.coords[0]
    if d0:
        out[0] = out[0] + LinExpr.symbol("d", d0)
        for u, vv in index_pairs(r):
            out[basis_index(u, vv, r)] = out[basis_index(u, vv, r)] + LinExpr.symbol(
                f"m_{u}{vv}", d0
            )
    for u, vv in index_pairs(r):
        c = concrete.coords[basis_index(u, vv, r)]
        if not c:
            continue
        out[0] = out[0] + LinExpr.symbol(f"n_{u}{vv}", -c)
        for p, q in index_pairs(r):
            out[basis_index(p, q, r)] = out[basis_index(p, q, r)] + LinExpr.symbol(
                f"e_{u}{vv}_{p}{q}", -c
            )
    return out


# ---------------------------------------------------------------------------
# The parity obstruction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PairDerivation:
    """Derivation that the involution actions at two blocks are never
    conjugate by any automorphism's lattice action."""

    r: int
    i: int
    j: int
    verdict: str
    relabelling: dict
    steps: tuple

    def to_dict(self):
        return {
            "r": self.r,
            "i": self.i,
            "j": self.j,
            "verdict": self.verdict,
            "relabelling": self.relabelling,
            "steps": [s.to_dict() for s in self.steps],
        }


def inequivalence_certificate(r: int, i: int, j: int) -> PairDerivation:
    """Symbolic proof fragment that no automorphism conjugates sigma_i to
    sigma_j (i != j): comparing one exceptional coefficient of the two
    images of L and inserting the coefficient constraint yields an equation
    that is odd on one side and even on the other.

    For i == j the pair is trivially equivalent (alpha = identity) and the
    fragment says so without claiming any contradiction.
    """
    if r < 3:
        raise ValueError("r >= 3 required")
    if not (1 <= i <= r and 1 <= j <= r):
        raise ValueError("involution indices out of range")
    steps = []
    relabel = {"from": [i, j], "canonical": [1, 2] if i != j else [1, 1]}
    if i == j:
        steps.append(
            DerivationStep(
                "positive-control",
                "identity-conjugation",
                {"i": i, "j": j},
                {"alpha": "identity", "conjugacy_holds": True},
            )
        )
        return PairDerivation(r, i, j, "EQUIVALENT_TRIVIALLY", relabel, tuple(steps))

    steps.append(
        DerivationStep(
            "reality-reduction",
            "real-points-make-rho-central",
            {"i": i, "j": j},
            {
                "statement": "all blown-up points real => alpha commutes with "
                "the real structure; cocycle equivalence of the two involutions "
                "reduces to lattice conjugacy sigma_i alpha = alpha sigma_j"
            },
        )
    )

    # Coefficient of E_{j1} in sigma_i(alpha(L)): block j is untouched by
    # sigma_i, so it is the letter m_{j1} itself.
    lhs = LinExpr.symbol(f"m_{j}1")
    steps.append(
        DerivationStep(
            "coefficient-lhs",
            "untouched-block",
            {"class": "L", "coefficient_of": f"E_{j}1", "order": f"sigma_{i} after alpha"},
            {"expression": lhs.render()},
        )
    )

    # Coefficient of E_{j1} in alpha(sigma_j(L)) via the symbolic alpha action.
    sigma_j_of_L = sigma_star(j, r).apply(PicXVector.line(r))
    image = _symbolic_alpha_image(sigma_j_of_L, r)
    rhs = image[basis_index(j, 1, r)]
    steps.append(
        DerivationStep(
            "coefficient-rhs",
            "letter-expansion",
            {"class": "L", "coefficient_of": f"E_{j}1", "order": f"alpha after sigma_{j}"},
            {"expression": rhs.render()},
        )
    )

    equation = rhs - lhs
    steps.append(
        DerivationStep(
            "coefficient-comparison",
            "equate-images",
            {"lhs": lhs.render(), "rhs": rhs.render()},
            {"equation": equation.render() + " = 0"},
        )
    )

    # Insert the coefficient constraint for the pair (j, 1):
    # sum_t e^{jt}_{j1} - 2 e^{j0}_{j1} + 1 = 0.
    constraint = LinExpr({f"e_{j}{t}_{j}1": 1 for t in range(1, 5)})
    constraint = constraint + LinExpr.symbol(f"e_{j}0_{j}1", -2) + 1
    reduced = equation + constraint
    steps.append(
        DerivationStep(
            "constraint-substitution",
            "coefficient-constraint-instance",
            {"constraint": constraint.render() + " = 0"},
            {"equation": reduced.render() + " = 0"},
        )
    )

    if not reduced.parity_contradiction():
        raise InconsistentPipeline("expected an odd constant over even letters")
    steps.append(
        DerivationStep(
            "parity",
            "mod-2-congruence",
            {"equation": reduced.render() + " = 0"},
            {"congruence": "1 = 0 (mod 2)", "verdict": "CONTRADICTION"},
        )
    )
    return PairDerivation(r, i, j, "CONTRADICTION", relabel, tuple(steps))


def replay_pair(der: PairDerivation) -> bool:
    """Re-derive the fragment and compare bit-exactly."""
    fresh = inequivalence_certificate(der.r, der.i, der.j)
    return fresh.to_dict() == der.to_dict()


# ---------------------------------------------------------------------------
# Cocycle check and the conjugacy oracle
# ---------------------------------------------------------------------------


def cocycle_check(i: int, r: int, all_points_real: bool = True) -> bool:
    """The involution action squares to the identity at lattice level; with
    every blown-up point real the real structure acts trivially on Pic(X),
    so the lifted involution is a genuine cocycle."""
    if not all_points_real:
        raise NonRealConfiguration("configuration contains non-certified points")
    sigma = sigma_star(i, r)
    return sigma.compose(sigma) == Isometry.identity(r)


@dataclass(frozen=True)
class NoneFound:
    depth: int
    words_tested: int

    def to_dict(self):
        return {"result": "none-found", "depth": self.depth, "words_tested": self.words_tested}


@dataclass(frozen=True)
class CounterExample:
    word: tuple

    def to_dict(self):
        return {"result": "counterexample", "word": list(self.word)}


def bounded_conjugacy_search(r: int, i: int, j: int, depth: int):
    """Test A sigma_i = sigma_j A over all words A of length <= depth in the
    involution actions. The generators square to the identity, so reduced
    words (no equal adjacent letters) already realise every word value.
    """
    if depth < 1:
        raise ValueError("depth >= 1 required")
    sigma_i, sigma_j = sigma_star(i, r), sigma_star(j, r)
    tested = 0
    for word, A in reduced_words(r, depth):
        tested += 1
        if A.compose(sigma_i) == sigma_j.compose(A):
            return CounterExample(word)
    return NoneFound(depth=depth, words_tested=tested)
