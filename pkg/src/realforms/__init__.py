"""Certified construction of rational surfaces with many real forms.

The package blows up the plane at 5r points on a real two-component cubic
curve and mechanically certifies that the r lifted cubic involutions are
pairwise inequivalent cocycles, so the surface carries at least r real
forms. Exact arithmetic everywhere: rationals, quadratic extensions,
isolated algebraic numbers and rational intervals on the curve side; big
integers on the lattice side.
"""

from .curve import (
    AlgebraicPoint,
    CubicCurve,
    CurvePoint,
    InfinityPoint,
    QuadPoint,
    RationalPoint,
    curve_properties,
)
from .group import (
    add,
    associated_points,
    double,
    halve,
    negate,
    point_above,
    scalar_mul,
    torsion_test,
    two_torsion,
)
from .independence import IndependenceWitness, RelationFound, independence_witness
from .lattice import (
    Isometry,
    PicXVector,
    anticanonical_class,
    canonical_class,
    intersect,
    isometry_checks,
    main_idea_identity,
    phi,
    sigma_star,
)
from .picgroup import (
    PicCElement,
    collinear_triple_test,
    degree,
    encode_3p0,
    encode_point,
    solve_relation,
)
from .verifier import (
    bounded_conjugacy_search,
    classify_restriction,
    cocycle_check,
    coefficient_constraints,
    diophantine_solve,
    inequivalence_certificate,
)
from .construct import SurfaceConfig, build_surface, sample_base_points, search_curve
from .certificate import (
    build_certificate,
    load_certificate,
    render_report,
    verify_certificate,
    write_certificate,
)

__version__ = "0.1.0"
