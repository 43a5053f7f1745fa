from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from realforms.errors import RepeatedPoint
from realforms.picgroup import (
    Contradiction,
    Forced,
    PicCElement,
    collinear_triple_test,
    degree,
    encode_3p0,
    encode_point,
    solve_relation,
)


def test_encode_basis_point():
    assert encode_point(1, 0, 3).to_list() == [1, 0, 0, 0, 0, 0]
    assert encode_point(1, 4, 3).to_list() == [0, 1, 0, 0, 0, 0]


def test_encode_other_base_points():
    assert encode_point(2, 0, 3).to_list() == [1, 2, -2, 0, 0, 0]
    assert encode_point(3, 0, 3).to_list() == [1, 2, 0, -2, 0, 0]


def test_encode_torsion_translates():
    assert encode_point(2, 1, 3).to_list() == [0, 0, 1, 0, 1, 0]
    assert encode_point(2, 2, 3).to_list() == [0, 0, 1, 0, 0, 1]
    assert encode_point(2, 3, 3).to_list() == [0, 0, 1, 0, 1, 1]


def test_encode_neutral_triple_class():
    assert encode_3p0(3).to_list() == [1, 2, 0, 0, 0, 0]
    assert encode_3p0(5).to_list() == [1, 2, 0, 0, 0, 0, 0, 0]


def test_degree_values():
    assert degree(encode_point(1, 0, 3)) == 1
    assert degree(encode_3p0(3)) == 3
    assert degree(PicCElement(0, (0, 0, 0), 1, 1)) == 0
    assert degree(encode_point(2, 0, 4)) == 1


def test_solve_relation_forced():
    result = solve_relation(1, (2, 0, 0), 0, 0, d=1)
    assert isinstance(result, Forced) and result.d == 1


def test_solve_relation_contradictions():
    result = solve_relation(1, (2, 1, 0), 0, 0, d=1)
    assert isinstance(result, Contradiction)
    assert result.step == "independence:n2"

    result = solve_relation(2, (4, 0, 0), 1, 0, d=2)
    assert isinstance(result, Contradiction)
    assert result.step == "parity"

    result = solve_relation(1, (1, 0, 0), 0, 0, d=1)
    assert isinstance(result, Contradiction)
    assert result.step == "independence:n1"


def test_two_torsion_doubling_vanishes():
    # 2 * encode(i, j) - 2 * encode(i, 4) has trivial torsion and zero free
    # part once the doubled relation is reduced: 2*delta = 0.
    for r in (3, 5):
        for i in range(1, r + 1):
            for j in (1, 2, 3):
                doubled = encode_point(i, j, r).scale(2) - encode_point(i, 4, r).scale(2)
                assert doubled.is_zero()


def test_collinear_triple_spec_example():
    assert collinear_triple_test([(1, 0), (1, 1), (1, 2)], 3) is False


def test_collinear_exhaustive_r3():
    pairs = [(i, j) for i in range(1, 4) for j in range(5)]
    count = 0
    for triple in combinations(pairs, 3):
        assert collinear_triple_test(triple, 3) is False
        count += 1
    assert count == 455


def test_collinear_repeated_point_rejected():
    with pytest.raises(RepeatedPoint):
        collinear_triple_test([(1, 0), (1, 0), (2, 1)], 3)


coeff = st.integers(min_value=-20, max_value=20)


@given(
    st.integers(min_value=3, max_value=6).flatmap(
        lambda r: st.tuples(
            st.just(r),
            coeff,
            st.lists(coeff, min_size=r, max_size=r),
            st.integers(min_value=0, max_value=3),
            st.integers(min_value=0, max_value=3),
        )
    )
)
@settings(max_examples=300, deadline=None)
def test_injectivity_at_desk_scale(args):
    # A random vector equated to 3d p_0 may only pass solve_relation in the
    # forced shape (m = d, n_1 = 2d, others 0, torsion even).
    r, m, n, s1, s2 = args
    total = m + sum(n)
    if total % 3 != 0:
        return
    d = total // 3
    result = solve_relation(m, tuple(n), s1, s2, d)
    if isinstance(result, Forced):
        assert m == d and n[0] == 2 * d
        assert all(v == 0 for v in n[1:])
        assert s1 % 2 == 0 and s2 % 2 == 0


def test_element_arithmetic():
    a = encode_point(2, 1, 3)
    b = encode_point(2, 4, 3)
    assert (a - b).to_list() == [0, 0, 0, 0, 1, 0]
    assert a.scale(2).to_list() == [0, 0, 2, 0, 0, 0]
    assert PicCElement.from_list([1, 2, 0, 0, 0, 0], 3) == encode_3p0(3)


def test_index_validation():
    with pytest.raises(ValueError):
        encode_point(0, 1, 3)
    with pytest.raises(ValueError):
        encode_point(1, 5, 3)
    with pytest.raises(ValueError):
        encode_point(4, 0, 3)
