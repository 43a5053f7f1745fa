from fractions import Fraction

import pytest

from realforms.algebraic import (
    AlgebraicNumber,
    algebraic_from_rational_coeffs,
    cmp_exact,
    int_poly_sign_at,
    isolate_real_roots,
)


def test_isolates_rational_and_irrational_roots():
    # x^4 - 8x = x (x - 2) (x^2 + 2x + 4): two rational roots, no real others
    roots = isolate_real_roots([0, -8, 0, 0, 1])
    assert roots == [Fraction(0), Fraction(2)]

    # x^3 - 2x - 1 = (x + 1)(x^2 - x - 1): golden-ratio pair plus -1
    roots = isolate_real_roots([-1, -2, 0, 1], bits=80)
    assert roots[0] == Fraction(-1)
    assert isinstance(roots[1], AlgebraicNumber)
    golden = roots[2].interval(80)
    assert golden.contains(Fraction(161803398875, 10**11)) or golden.mid > Fraction(8, 5)


def test_roots_sorted_and_separated():
    # (x^2 - 2)(x^2 - 3): four irrational roots interleaved with sqrt values
    roots = isolate_real_roots([6, 0, -5, 0, 1], bits=64)
    mids = [r.interval(64).mid for r in roots]
    assert mids == sorted(mids)
    assert len(roots) == 4
    boxes = [r.interval(64) for r in roots]
    for i in range(3):
        assert boxes[i].disjoint(boxes[i + 1])


def test_refinement_keeps_isolating_the_same_root():
    # The certified-interval soundness property: refining twice as far nests.
    root = isolate_real_roots([-2, 0, 1], bits=32)[1]  # sqrt(2)
    coarse = root.interval(32)
    fine = root.interval(64)
    finer = root.interval(128)
    assert coarse.contains_interval(fine)
    assert fine.contains_interval(finer)
    assert int_poly_sign_at(root.coeffs, fine.lo) != int_poly_sign_at(root.coeffs, fine.hi)
    assert fine.width <= Fraction(1, 1 << 64)


def test_compare_fraction_and_equals():
    sqrt2 = isolate_real_roots([-2, 0, 1], bits=16)[1]
    assert sqrt2.compare_fraction(Fraction(1)) == 1
    assert sqrt2.compare_fraction(Fraction(3, 2)) == -1
    assert not sqrt2.equals_fraction(Fraction(7, 5))

    other_sqrt2 = isolate_real_roots([-2, 0, 1], bits=4)[1]
    assert sqrt2.equals(other_sqrt2)
    minus_sqrt2 = isolate_real_roots([-2, 0, 1], bits=4)[0]
    assert not sqrt2.equals(minus_sqrt2)
    # same number as a root of a composite polynomial: (x^2-2)(x-5)
    composite = isolate_real_roots([10, -2, -5, 1], bits=8)
    assert sqrt2.equals([r for r in composite if not isinstance(r, Fraction)][1])


def test_cmp_exact_mixed_types():
    sqrt2, sqrt3 = (isolate_real_roots([param, 0, 1], bits=16)[1] for param in (-2, -3))
    assert cmp_exact(Fraction(1), Fraction(2)) == -1
    assert cmp_exact(sqrt2, Fraction(2)) == -1
    assert cmp_exact(Fraction(2), sqrt2) == 1
    assert cmp_exact(sqrt2, sqrt3) == -1
    assert cmp_exact(sqrt3, sqrt2) == 1
    assert cmp_exact(sqrt2, isolate_real_roots([-2, 0, 1], bits=4)[1]) == 0


def test_from_rational_coeffs_validates_sign_change():
    num = algebraic_from_rational_coeffs(
        [Fraction(-1, 2), Fraction(0), Fraction(1)], Fraction(1, 2), Fraction(1)
    )  # sqrt(1/2)
    box = num.interval(64)
    assert box.lo * box.lo <= Fraction(1, 2) <= box.hi * box.hi
    with pytest.raises(ValueError):
        algebraic_from_rational_coeffs([Fraction(-2), Fraction(0), Fraction(1)], 2, 3)
