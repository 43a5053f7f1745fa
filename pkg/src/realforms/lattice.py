"""Integer linear algebra on the Picard lattice of the blown-up plane.

Pic(X) is free on the line class L and the 5r exceptional classes E_ij
(1 <= i <= r, 0 <= j <= 4, ordered lexicographically). Vectors are stored in
the sign convention d*[L] - sum(m_ij * [E_ij]), i.e. as coordinate tuples
(d, m_10, ..., m_r4); with this convention the intersection form is still
the diagonal form Q = diag(1, -1, ..., -1).

Isometries are stored as the matrix acting on these coordinate tuples. The
equivalent matrix on true basis coefficients (whose columns read off the
letters d, m_ij, n_kl, e_ij^kl directly) is Q * A * Q and is exposed as
``paper_matrix`` for the verifier's coefficient work.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import DimensionMismatch, IdentityViolated
from .picgroup import PicCElement, encode_3p0, encode_point


def dim(r: int) -> int:
    return 5 * r + 1


def basis_index(i: int, j: int, r: int) -> int:
    """Index of E_ij in the basis [L], E_10, ..., E_r4."""
    if not (1 <= i <= r and 0 <= j <= 4):
        raise ValueError(f"exceptional index ({i},{j}) out of range for r={r}")
    return 1 + 5 * (i - 1) + j


def index_pairs(r: int):
    return [(i, j) for i in range(1, r + 1) for j in range(5)]


@dataclass(frozen=True)
class PicXVector:
    """Divisor class d*[L] - sum(m_ij * [E_ij]) as a coordinate tuple."""

    coords: tuple
    r: int

    def __post_init__(self):
        if len(self.coords) != dim(self.r):
            raise DimensionMismatch(
                f"expected {dim(self.r)} coordinates, got {len(self.coords)}"
            )
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))

    @classmethod
    def line(cls, r: int) -> "PicXVector":
        return cls((1,) + (0,) * (5 * r), r)

    @classmethod
    def exceptional(cls, i: int, j: int, r: int) -> "PicXVector":
        coords = [0] * dim(r)
        coords[basis_index(i, j, r)] = -1
        return cls(tuple(coords), r)

    @classmethod
    def from_d_m(cls, d: int, m: dict, r: int) -> "PicXVector":
        coords = [0] * dim(r)
        coords[0] = d
        for (i, j), value in m.items():
            coords[basis_index(i, j, r)] = value
        return cls(tuple(coords), r)

    @property
    def d(self) -> int:
        return self.coords[0]

    def m(self, i: int, j: int) -> int:
        return self.coords[basis_index(i, j, self.r)]

    def __add__(self, other: "PicXVector") -> "PicXVector":
        self._match(other)
        return PicXVector(tuple(a + b for a, b in zip(self.coords, other.coords)), self.r)

    def __sub__(self, other: "PicXVector") -> "PicXVector":
        self._match(other)
        return PicXVector(tuple(a - b for a, b in zip(self.coords, other.coords)), self.r)

    def scale(self, k: int) -> "PicXVector":
        return PicXVector(tuple(k * c for c in self.coords), self.r)

    def _match(self, other):
        if not isinstance(other, PicXVector) or other.r != self.r:
            raise DimensionMismatch("mixing lattices of different rank")

    def self_intersection(self) -> int:
        return intersect(self, self)


def canonical_class(r: int) -> PicXVector:
    """K_X = -3[L] + sum E_ij, so coordinates (-3, -1, ..., -1)."""
    return PicXVector((-3,) + (-1,) * (5 * r), r)


def anticanonical_class(r: int) -> PicXVector:
    """The class of the strict transform of the cubic: 3[L] - sum E_ij."""
    return PicXVector((3,) + (1,) * (5 * r), r)


def intersect(v: PicXVector, w: PicXVector) -> int:
    """Intersection number: L^2 = 1, E_ij^2 = -1, mixed products zero."""
    v._match(w)
    return v.coords[0] * w.coords[0] - sum(
        a * b for a, b in zip(v.coords[1:], w.coords[1:])
    )


# ---------------------------------------------------------------------------
# Isometries
# ---------------------------------------------------------------------------


def _mat_mul(A, B):
    n = len(A)
    Bcols = tuple(zip(*B))
    return tuple(
        tuple(sum(a * b for a, b in zip(row, col)) for col in Bcols) for row in A
    )


def _identity_matrix(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def _q_conjugate(A):
    """Q * A * Q for Q = diag(1, -1, ..., -1): flips signs of first row and
    first column except the corner."""
    n = len(A)
    return tuple(
        tuple(A[i][j] * (-1 if (i == 0) != (j == 0) else 1) for j in range(n))
        for i in range(n)
    )


class Isometry:
    """Integer matrix acting on Pic(X) coordinate vectors."""

    __slots__ = ("matrix", "r", "_paper", "_checks")

    def __init__(self, matrix, r: int):
        n = dim(r)
        matrix = tuple(tuple(int(v) for v in row) for row in matrix)
        if len(matrix) != n or any(len(row) != n for row in matrix):
            raise DimensionMismatch(f"matrix must be {n}x{n} for r={r}")
        self.matrix = matrix
        self.r = r
        self._paper = None
        self._checks = None

    @classmethod
    def identity(cls, r: int) -> "Isometry":
        return cls(_identity_matrix(dim(r)), r)

    @classmethod
    def sigma_star(cls, i: int, r: int) -> "Isometry":
        """Action on Pic(X) of the lifted cubic involution centred at p_i0.

        L maps to 3L - 2E_i0 - E_i1 - ... - E_i4; E_i0 to 2L - E_i0 - ... -
        E_i4; E_ij (j != 0) to L - E_i0 - E_ij; all other blocks are fixed.
        """
        if not (1 <= i <= r):
            raise ValueError(f"sigma index {i} out of range for r={r}")
        n = dim(r)
        cols = []
        # Column of [L]: coordinates of 3L - 2E_i0 - sum_j!=0 E_ij.
        col = [0] * n
        col[0] = 3
        col[basis_index(i, 0, r)] = 2
        for j in range(1, 5):
            col[basis_index(i, j, r)] = 1
        cols.append(col)
        for k, l in index_pairs(r):
            col = [0] * n
            if k != i:
                col[basis_index(k, l, r)] = 1  # E_kl fixed: unit column
            elif l == 0:
                # E_i0 -> 2L - sum_j E_ij; acting column is minus its coords.
                col[0] = -2
                for j in range(5):
                    col[basis_index(i, j, r)] = -1
            else:
                # E_il -> L - E_i0 - E_il.
                col[0] = -1
                col[basis_index(i, 0, r)] = -1
                col[basis_index(i, l, r)] = -1
            cols.append(col)
        return cls(tuple(zip(*cols)), r)

    @property
    def paper_matrix(self):
        """Matrix on true basis coefficients: entries are the customary
        letters (column of L holds d, -m_ij; column of E_kl holds n_kl,
        -e_ij^kl)."""
        if self._paper is None:
            self._paper = _q_conjugate(self.matrix)
        return self._paper

    # -- letter accessors ------------------------------------------------

    @property
    def d(self) -> int:
        return self.matrix[0][0]

    def m_coeff(self, i: int, j: int) -> int:
        """Coefficient m_ij in g(L) = d*L - sum m_ij E_ij."""
        return -self.paper_matrix[basis_index(i, j, self.r)][0]

    def n_coeff(self, k: int, l: int) -> int:
        """Coefficient n_kl in g(E_kl) = n_kl*L - sum e^kl_ij E_ij."""
        return self.paper_matrix[0][basis_index(k, l, self.r)]

    def e_coeff(self, i: int, j: int, k: int, l: int) -> int:
        """Coefficient e^kl_ij of E_ij in the image of E_kl."""
        return -self.paper_matrix[basis_index(i, j, self.r)][basis_index(k, l, self.r)]

    # -- algebra -----------------------------------------------------------

    def apply(self, v: PicXVector) -> PicXVector:
        if v.r != self.r:
            raise DimensionMismatch("vector rank mismatch")
        return PicXVector(
            tuple(sum(row[k] * v.coords[k] for k in range(len(row))) for row in self.matrix),
            self.r,
        )

    def compose(self, other: "Isometry") -> "Isometry":
        """Self after other, as maps on Pic(X)."""
        if other.r != self.r:
            raise DimensionMismatch("rank mismatch")
        return Isometry(_mat_mul(self.matrix, other.matrix), self.r)

    def inverse(self) -> "Isometry":
        """For isometries A^-1 = Q A^T Q, no general inversion needed."""
        if not self.is_isometry:
            raise IdentityViolated("inverse shortcut only valid for isometries")
        transposed = tuple(zip(*self.matrix))
        return Isometry(_q_conjugate(transposed), self.r)

    def __eq__(self, other):
        return (
            isinstance(other, Isometry)
            and self.r == other.r
            and self.matrix == other.matrix
        )

    def __hash__(self):
        return hash((self.r, self.matrix))

    def __repr__(self):
        return f"Isometry(r={self.r}, dim={dim(self.r)})"

    # -- checks ------------------------------------------------------------

    def _compute_checks(self):
        n = dim(self.r)
        A = self.matrix
        # A^T Q A == Q, written without forming Q.
        ok_form = True
        for a in range(n):
            if not ok_form:
                break
            for b in range(a, n):
                val = A[0][a] * A[0][b] - sum(A[k][a] * A[k][b] for k in range(1, n))
                expected = 0 if a != b else (1 if a == 0 else -1)
                if val != expected:
                    ok_form = False
                    break
        K = canonical_class(self.r)
        ok_k = self.apply(K) == K
        return ok_form, ok_k

    @property
    def is_isometry(self) -> bool:
        if self._checks is None:
            self._checks = self._compute_checks()
        return self._checks[0]

    @property
    def preserves_K(self) -> bool:
        if self._checks is None:
            self._checks = self._compute_checks()
        return self._checks[1]

    def to_dict(self):
        return {"r": self.r, "dim": dim(self.r), "rows": [list(row) for row in self.matrix]}

    @classmethod
    def from_dict(cls, data) -> "Isometry":
        iso = cls(tuple(tuple(row) for row in data["rows"]), int(data["r"]))
        if data.get("dim") not in (None, dim(iso.r)):
            raise DimensionMismatch("header dimension disagrees with r")
        return iso


def isometry_checks(G: Isometry):
    """(preserves the intersection form, fixes the canonical class)."""
    return (G.is_isometry, G.preserves_K)


def sigma_star(i: int, r: int) -> Isometry:
    return Isometry.sigma_star(i, r)


# ---------------------------------------------------------------------------
# The homomorphism to Pic(C)
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _encode_cache(i, j, r):
    return encode_point(i, j, r)


def phi(v: PicXVector, r: int | None = None) -> PicCElement:
    """Image of d*L - sum m_ij E_ij in Pic(C): 3d p_0 - sum m_ij p_ij,
    rewritten in the basis (p_10; p_14..p_r4; delta_1, delta_2)."""
    r = v.r if r is None else r
    if v.r != r:
        raise DimensionMismatch("vector rank mismatch")
    total = encode_3p0(r).scale(v.d)
    for i, j in index_pairs(r):
        coeff = v.m(i, j)
        if coeff:
            total = total + _encode_cache(i, j, r).scale(-coeff)
    return total


def phi_equivariant_on_basis(G: Isometry) -> bool:
    """Whether phi(G(e)) == phi(e) for every basis class e; true for all
    words in the cubic-involution actions, which fix the curve pointwise."""
    r = G.r
    basis = [PicXVector.line(r)] + [
        PicXVector.exceptional(i, j, r) for i, j in index_pairs(r)
    ]
    return all(phi(G.apply(e)) == phi(e) for e in basis)


# ---------------------------------------------------------------------------
# Quadratic-form identity
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadraticIdentity:
    """Both evaluated sides of the isometry identity for a row vector v."""

    lhs: int
    rhs: int
    image_coords: tuple
    pullback_matches: bool


def paper_dot_column(G: Isometry, v, col: int) -> int:
    """Row vector v (entries a_0, a_ij) dotted with a paper-matrix column."""
    paper = G.paper_matrix
    return sum(v[k] * paper[k][col] for k in range(len(v)))


def main_idea_identity(G: Isometry, v) -> QuadraticIdentity:
    """Check, exactly, the two identities an isometry satisfies for any
    integer row vector v = (a_0, a_10, ..., a_r4):

    * the divisor a_0 L - sum a_ij E_ij equals the image under G of
      (v.G_0) L - sum (v.G_ij) E_ij, and
    * a_0^2 - sum a_ij^2 == (v.G_0)^2 - sum (v.G_ij)^2.

    Raises IdentityViolated when either fails (so G was not an isometry).
    """
    r = G.r
    n = dim(r)
    v = tuple(int(x) for x in v)
    if len(v) != n:
        raise DimensionMismatch(f"row vector must have length {n}")
    if not (G.is_isometry and G.preserves_K):
        raise IdentityViolated("matrix fails the isometry or canonical-class check")
    dots = tuple(paper_dot_column(G, v, col) for col in range(n))
    lhs = v[0] ** 2 - sum(a * a for a in v[1:])
    rhs = dots[0] ** 2 - sum(a * a for a in dots[1:])
    image = G.apply(PicXVector(dots, r))
    matches = image == PicXVector(v, r)
    if lhs != rhs or not matches:
        raise IdentityViolated(
            f"identity failed: lhs={lhs}, rhs={rhs}, pullback match={matches}"
        )
    return QuadraticIdentity(lhs=lhs, rhs=rhs, image_coords=dots, pullback_matches=matches)


# ---------------------------------------------------------------------------
# Word enumeration (sanity oracles and diagnostics)
# ---------------------------------------------------------------------------


def reduced_words(r: int, max_length: int):
    """All products of the involution actions given by reduced words (no two
    equal adjacent letters) of length <= max_length, as (word, Isometry).

    Because each generator squares to the identity, the set of matrix values
    of all words of length <= L equals that of the reduced words.
    """
    generators = {i: sigma_star(i, r) for i in range(1, r + 1)}
    out = [((), Isometry.identity(r))]
    frontier = [((), Isometry.identity(r))]
    for _ in range(max_length):
        new_frontier = []
        for word, matrix in frontier:
            for i in range(1, r + 1):
                if word and word[-1] == i:
                    continue
                extended = (matrix.compose(generators[i]), word + (i,))
                new_frontier.append((extended[1], extended[0]))
        out.extend(new_frontier)
        frontier = new_frontier
    return out


def spectral_radius_estimate(G: Isometry) -> float:
    """Float spectral radius of the acting matrix; report-only diagnostic."""
    import numpy as np

    eigenvalues = np.linalg.eigvals(np.array(G.matrix, dtype=np.float64))
    return float(max(abs(eigenvalues)))
