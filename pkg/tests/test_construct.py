from fractions import Fraction

import pytest

from realforms.construct import (
    Rejection,
    build_surface,
    sample_base_points,
    search_curve,
)
from realforms.curve import CubicCurve, RationalPoint
from realforms.errors import SearchExhausted
from realforms.group import add, double, negate, point_above, tangency_residual
from realforms.independence import IndependenceWitness


def test_search_curve_deterministic_and_qualifying():
    a = search_curve(7)
    b = search_curve(7)
    assert a == b
    assert a.component_count == 2
    assert a.aut_gp_is_z2
    assert search_curve(8) != a or search_curve(8) == a  # just runs


def test_symmetric_root_triples_rejected():
    # {-1, 0, 1} and {1, 2, 3} both give j = 1728 and must never qualify
    for roots in ((-1, 0, 1), (1, 2, 3)):
        curve = CubicCurve.from_roots(*roots)
        assert not curve.aut_gp_is_z2
        assert curve.j_invariant == 1728


def test_search_exhausted_with_zero_attempts():
    with pytest.raises(SearchExhausted):
        search_curve(0, attempts=0)


@pytest.fixture(scope="module")
def pipeline():
    curve = search_curve(7)
    points, witness, rejections = sample_base_points(curve, 3, seed=7)
    return curve, points, witness, rejections


def test_sample_base_points_contract(pipeline):
    curve, points, witness, rejections = pipeline
    assert len(points) == 3
    assert isinstance(witness, IndependenceWitness)
    for p in points:
        assert p.component() == "identity"
        assert p.y_sign_value() != 0


def test_sample_base_points_deterministic(pipeline):
    curve, points, witness, _ = pipeline
    points2, witness2, _ = sample_base_points(curve, 3, seed=7)
    assert [p.to_dict() for p in points] == [p.to_dict() for p in points2]
    assert witness.to_dict() == witness2.to_dict()


def test_injected_dependent_point_rejected(pipeline):
    curve, points, _, _ = pipeline
    p1 = points[0]
    injected = double(p1)  # [2] p_10 offered as the second base point
    pts, witness, rejections = sample_base_points(
        curve, 3, seed=11, proposed=[p1, injected]
    )
    relation_rejections = [x for x in rejections if x.reason == "relation"]
    assert relation_rejections
    assert "[2, -1]" in relation_rejections[0].detail
    assert len(pts) == 3


def test_injected_torsion_point_rejected(pipeline):
    curve, _, _, _ = pipeline
    a3 = curve.real_roots()[2]
    torsion = RationalPoint(curve, a3, 0)
    pts, _, rejections = sample_base_points(curve, 3, seed=12, proposed=[torsion])
    torsion_rejections = [x for x in rejections if x.reason == "torsion"]
    assert torsion_rejections


def test_injected_oval_point_rejected(pipeline):
    curve, _, _, _ = pipeline
    roots = curve.real_roots()
    x = (Fraction(roots[0]) + Fraction(roots[1])) / 2
    oval = point_above(curve, x, 1)
    pts, _, rejections = sample_base_points(curve, 3, seed=13, proposed=[oval])
    assert any(x.reason == "component" for x in rejections)


@pytest.fixture(scope="module")
def config(pipeline):
    curve, points, witness, _ = pipeline
    return build_surface(curve, points, 3, witness, seed=7)


def test_surface_has_all_points(config):
    labelled = config.all_points()
    assert len(labelled) == 15
    indices = [idx for idx, _ in labelled]
    assert len(set(indices)) == 15


def test_surface_delta_labelling_consistent(config):
    # p_ik - p_i4 must equal delta_k for every block, under the group law
    curve = config.curve
    for i in range(1, 4):
        block = config.associated[i]
        p_i4 = block[3]
        for k in range(1, 4):
            diff = add(block[k - 1], negate(p_i4), bits=128)
            delta = config.deltas[k - 1]
            assert diff.x_interval(128).contains(delta.x)
            assert diff.y_interval(128).contains_zero()


def test_surface_tangencies(config):
    curve = config.curve
    for i, p in enumerate(config.base_points, start=1):
        for q in config.associated[i]:
            assert tangency_residual(curve, q, p, 128).contains_zero()


def test_surface_deterministic(pipeline):
    curve, points, witness, _ = pipeline
    a = build_surface(curve, points, 3, witness, seed=7)
    b = build_surface(curve, points, 3, witness, seed=7)
    assert a.to_dict() == b.to_dict()


def test_surface_serialization_shape(config):
    data = config.to_dict()
    assert data["r"] == 3
    assert len(data["base_points"]) == 3
    assert set(data["associated_points"]) == {"1", "2", "3"}
    assert all(len(block) == 4 for block in data["associated_points"].values())
    assert data["all_points_real"] is True
    assert data["independence"]["bound"] == 50
