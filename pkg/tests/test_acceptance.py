"""Acceptance suite: one test per criterion, each printing a PASS line with
its runtime. Tolerances are exact (integer identities) or the stated interval
widths; time budgets are asserted against a monotonic clock.
"""

import json
import random
import subprocess
import sys
import time
from fractions import Fraction
from itertools import combinations

import pytest

from realforms.algebraic import isolate_real_roots
from realforms.certificate import verify_certificate
from realforms.construct import build_surface, sample_base_points, search_curve
from realforms.curve import CubicCurve, InfinityPoint, RationalPoint
from realforms.errors import NoRealAssociates, NotAllReal, ZeroDiscriminant
from realforms.group import (
    add,
    associated_points,
    double,
    halve,
    negate,
    point_above,
    real_two_torsion,
    two_torsion,
)
from realforms.independence import RelationFound, independence_witness
from realforms.lattice import (
    Isometry,
    PicXVector,
    canonical_class,
    intersect,
    isometry_checks,
    phi,
    phi_equivariant_on_basis,
    sigma_star,
    index_pairs,
)
from realforms.verifier import (
    NoneFound,
    bounded_conjugacy_search,
    diophantine_solve,
    enumerate_solutions,
    inequivalence_certificate,
    replay_pair,
)
from helpers import curve_through, rational_points_pool


def _report(number: int, label: str, started: float, budget: float):
    elapsed = time.monotonic() - started
    print(f"ACCEPTANCE {number}: PASS - {label} ({elapsed:.2f}s, budget {budget:.0f}s)")
    assert elapsed < budget, f"criterion {number} exceeded its {budget}s budget"


def test_criterion_1_sigma_matrix_suite():
    started = time.monotonic()
    for r in range(3, 7):
        identity = Isometry.identity(r)
        K = canonical_class(r)
        basis = [PicXVector.line(r)] + [
            PicXVector.exceptional(i, j, r) for i, j in index_pairs(r)
        ]
        for i in range(1, r + 1):
            sigma = sigma_star(i, r)
            assert sigma.compose(sigma) == identity
            assert isometry_checks(sigma) == (True, True)
            assert sigma.apply(K) == K
            for e in basis:
                assert phi(sigma.apply(e)) == phi(e)
    _report(1, "sigma matrices: involutive isometries fixing K, phi-equivariant", started, 1.0)


def test_criterion_2_diophantine_suite():
    started = time.monotonic()
    for which in ("m", "n1", "ns"):
        for r in range(3, 51):
            for a in (1, -1):
                exact = diophantine_solve(which, r, a).solutions
                assert exact == (0,)
                brute = enumerate_solutions(which, r, a, limit=10**6)
                assert brute == [0]
    _report(2, "three eliminations solve to {0}, brute-forced over |x| <= 10^6", started, 10.0)


def test_criterion_3_parity_obstruction():
    started = time.monotonic()
    for r in range(3, 7):
        for i in range(1, r + 1):
            for j in range(1, r + 1):
                if i == j:
                    continue
                der = inequivalence_certificate(r, i, j)
                assert der.verdict == "CONTRADICTION"
                parity = der.steps[-1]
                assert parity.outputs["congruence"] == "1 = 0 (mod 2)"
                reduced = der.steps[-2].outputs["equation"]
                assert f"+2*m_{j}1" in reduced and f"-4*e_{j}0_{j}1" in reduced
                assert reduced.endswith("+1 = 0")
                assert replay_pair(der)
    _report(3, "all ordered pairs end in 1 = 0 (mod 2), replay exact", started, 5.0)


def test_criterion_4_conjugacy_oracle():
    started = time.monotonic()
    result = bounded_conjugacy_search(3, 1, 2, depth=6)
    assert isinstance(result, NoneFound)
    assert result.words_tested == 190
    _report(4, "no conjugating word of length <= 6 exists", started, 60.0)


def test_criterion_5_elliptic_core():
    started = time.monotonic()
    specs = [
        [(0, 1), (2, 3), (-1, 0)],
        [(1, 2), (3, 5), (0, 1)],
        [(2, 1), (5, 4), (1, 1)],
        [(0, 2), (1, 3), (4, 7)],
    ]
    pools = []
    for seeds in specs:
        curve = curve_through(seeds)
        if curve is not None:
            pools.append((curve, rational_points_pool(curve, seeds)))
    assert len(pools) >= 3
    rng = random.Random(2024)
    triples = 0
    while triples < 1000:
        curve, pool = pools[triples % len(pools)]
        everything = pool + [InfinityPoint(curve)]
        P, Q, R = (rng.choice(everything) for _ in range(3))
        left, right = add(add(P, Q), R), add(P, add(Q, R))
        assert left == right or (left.is_infinity and right.is_infinity)
        ab, ba = add(P, Q), add(Q, P)
        assert ab == ba or (ab.is_infinity and ba.is_infinity)
        assert add(P, negate(P)).is_infinity
        triples += 1

    curve = CubicCurve.from_roots(-1, 0, 2)
    roundtrips = 0
    x = Fraction(3)
    while roundtrips < 100:
        S = point_above(curve, x, 1 if roundtrips % 2 else -1)
        for q in halve(curve, S, bits=128):
            dq = double(q, bits=128)
            assert dq.x_interval(128).overlaps(S.x_interval(200))
            assert dq.y_interval(128).overlaps(S.y_interval(200))
            roundtrips += 1
        x += Fraction(7, 3)
    _report(5, "1000 exact group-law triples; 100 halve/double round-trips", started, 60.0)


def test_criterion_6_associated_point_structure():
    started = time.monotonic()
    tolerance = Fraction(1, 1 << 100)
    curves = [
        CubicCurve.from_roots(-1, 0, 2),
        CubicCurve.from_roots(-3, 1, 4),
        CubicCurve.from_roots(-10, -9, -5),
    ]
    points_checked = 0
    for curve in curves:
        a3 = curve.real_roots()[2]
        torsion_xs = [Fraction(root) for root in curve.real_roots()]
        for offset in (1, 2, Fraction(7, 2), 5, Fraction(19, 4), 8, 13):
            p = point_above(curve, Fraction(a3) + offset, 1 if points_checked % 2 else -1)
            qs = associated_points(curve, p, bits=192)
            assert len(qs) == 4
            deltas = {}
            for s, t in combinations(range(4), 2):
                diff = add(qs[s], negate(qs[t]), bits=192)
                box_x, box_y = diff.x_interval(192), diff.y_interval(192)
                assert box_x.width <= tolerance and box_y.width <= tolerance
                hits = [x for x in torsion_xs if box_x.contains(x)]
                assert len(hits) == 1 and box_y.contains_zero()
                deltas[(s, t)] = hits[0]
            # complementary pairs realise the same 2-torsion point, and all
            # three nonzero elements of the 2-torsion group appear
            assert deltas[(0, 1)] == deltas[(2, 3)]
            assert deltas[(0, 2)] == deltas[(1, 3)]
            assert deltas[(0, 3)] == deltas[(1, 2)]
            assert {deltas[(0, 1)], deltas[(0, 2)], deltas[(0, 3)]} == set(torsion_xs)
            points_checked += 1
    assert points_checked >= 20
    _report(6, f"{points_checked} base points: 4 real associates realising C[2], width <= 2^-100",
            started, 120.0)


def test_criterion_7_component_equivalences():
    started = time.monotonic()
    rng = random.Random(61)
    checked = 0
    while checked < 100:
        c2, c1, c0 = (Fraction(rng.randint(-8, 8)) for _ in range(3))
        try:
            curve = CubicCurve(c2, c1, c0)
        except ZeroDiscriminant:
            continue
        real_roots = isolate_real_roots(curve.f_coeffs(), bits=32)
        three_roots = len(real_roots) == 3
        assert (curve.component_count == 2) == three_roots
        if three_roots:
            assert len(two_torsion(curve)) == 4
        else:
            with pytest.raises(NotAllReal):
                two_torsion(curve)
            assert len(real_two_torsion(curve)) == 2
        checked += 1

    for roots in ((-1, 0, 2), (-4, -1, 3), (-6, 2, 5)):
        curve = CubicCurve.from_roots(*roots)
        a1, a2, a3 = (Fraction(v) for v in roots)
        identity_pt = point_above(curve, a3 + 2, 1)
        assert len(associated_points(curve, identity_pt, bits=128)) == 4
        x_oval = a1 + (a2 - a1) / 3
        oval_pt = point_above(curve, x_oval, 1)
        with pytest.raises(NoRealAssociates):
            associated_points(curve, oval_pt, bits=128)
    _report(7, "100 cubics: components <=> real roots <=> real 2-torsion; oval 0 / identity 4",
            started, 120.0)


def test_criterion_8_canonical_self_intersection():
    started = time.monotonic()
    for r in range(3, 11):
        K = canonical_class(r)
        assert intersect(K, K) == 9 - 5 * r
    _report(8, "K^2 = 9 - 5r for r in [3, 10]", started, 1.0)


def test_criterion_9_end_to_end(tmp_path):
    started = time.monotonic()
    out1, out2 = tmp_path / "cert1.json", tmp_path / "cert2.json"
    construct = [sys.executable, "-m", "realforms.cli", "construct",
                 "--r", "3", "--seed", "7", "--quiet"]
    t0 = time.monotonic()
    proc = subprocess.run(construct + ["--out", str(out1)], capture_output=True, text=True)
    construct_time = time.monotonic() - t0
    assert proc.returncode == 0, proc.stderr
    assert construct_time < 30.0

    document = json.loads(out1.read_text())
    result = verify_certificate(document)
    assert result.ok, (result.failed_step, result.detail)

    proc = subprocess.run(construct + ["--out", str(out2)], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert out1.read_bytes() == out2.read_bytes()
    _report(9, f"construct --r 3 --seed 7 in {construct_time:.1f}s; verify PASS; rerun byte-identical",
            started, 90.0)


def test_criterion_10_negative_controls(tmp_path):
    started = time.monotonic()
    curve = search_curve(7)
    points, witness, _ = sample_base_points(curve, 3, seed=7)

    # dependent point sets are rejected with an explicit relation
    dependent = independence_witness(curve, [points[0], double(points[0])], bound=50)
    assert isinstance(dependent, RelationFound)
    assert dependent.coefficients == (2, -1)
    injected, _, rejections = sample_base_points(
        curve, 3, seed=23, proposed=[points[0], double(points[0])]
    )
    assert any(r.reason == "relation" for r in rejections)
    assert len(injected) == 3

    # tampered certificates fail at the correct replay step
    config = build_surface(curve, points, 3, witness, seed=7)
    from realforms.certificate import build_certificate

    document = build_certificate(config, {
        "r": 3, "seed": 7, "precision_bits": 128, "precision_ceiling": 2048,
        "relation_bound": 50, "torsion_max_order": 200, "conjugacy_depth": 0,
    })
    flipped = json.loads(json.dumps(document))
    flipped["lattice"]["sigma_matrices"]["1"]["rows"][0][1] += 2
    result = verify_certificate(flipped)
    assert not result.ok and result.failed_step == "matrix:1:isometry_checks"

    forged = json.loads(json.dumps(document))
    for pair in forged["pairs"]:
        for step in pair["steps"]:
            if step["step_kind"] == "parity":
                step["outputs"]["congruence"] = "0 = 0 (mod 2)"
    result = verify_certificate(forged)
    assert not result.ok
    assert result.failed_step.startswith("pair:") and "parity" in result.detail
    _report(10, "dependent sets rejected; tampering caught at the right step", started, 60.0)
