import json
import subprocess
import sys

import pytest

from realforms.certificate import (
    SCHEMA,
    build_certificate,
    dumps_canonical,
    load_certificate,
    render_report,
    verify_certificate,
    write_certificate,
)
from realforms.cli import main
from realforms.construct import build_surface, sample_base_points, search_curve
from realforms.errors import ParseError


@pytest.fixture(scope="module")
def document():
    curve = search_curve(7)
    points, witness, _ = sample_base_points(curve, 3, seed=7)
    config = build_surface(curve, points, 3, witness, seed=7)
    parameters = {
        "r": 3,
        "seed": 7,
        "precision_bits": 128,
        "precision_ceiling": 2048,
        "relation_bound": 50,
        "torsion_max_order": 200,
        "conjugacy_depth": 4,
    }
    return build_certificate(config, parameters)


def test_certificate_verifies(document):
    result = verify_certificate(document)
    assert result.ok, (result.failed_step, result.detail)
    assert result.steps_run > 30


def test_certificate_structure(document):
    assert document["schema"] == SCHEMA
    assert document["verdict"]["claim"] == "at least 3 real forms"
    assert document["verdict"]["status"] == "VERIFIED"
    assert len(document["pairs"]) == 6
    assert document["lattice"]["canonical_self_intersection"] == -6
    checks = document["lattice"]["checks"]
    for i in ("1", "2", "3"):
        assert checks[i] == {
            "involution": True,
            "isometry": True,
            "fixes_canonical": True,
            "phi_equivariant": True,
            "cocycle": True,
        }
    oracle = document["conjugacy_oracle"]
    assert oracle["depth"] == 4
    assert all(v["result"] == "none-found" for v in oracle["pairs"].values())


def test_canonical_serialization_is_stable(document):
    text = dumps_canonical(document)
    assert text == dumps_canonical(json.loads(text))


def _tamper(document, mutate):
    clone = json.loads(dumps_canonical(document))
    mutate(clone)
    return clone


def test_tampered_matrix_fails_at_isometry_step(document):
    def mutate(doc):
        doc["lattice"]["sigma_matrices"]["2"]["rows"][0][0] += 1

    result = verify_certificate(_tamper(document, mutate))
    assert not result.ok
    assert result.failed_step == "matrix:2:isometry_checks"


def test_forged_parity_step_fails_at_parity(document):
    def mutate(doc):
        for pair in doc["pairs"]:
            for step in pair["steps"]:
                if step["step_kind"] == "parity":
                    step["outputs"]["congruence"] = "0 = 0 (mod 2)"

    result = verify_certificate(_tamper(document, mutate))
    assert not result.ok
    assert result.failed_step.startswith("pair:")
    assert "parity" in result.detail


def test_tampered_curve_invariant_fails(document):
    def mutate(doc):
        doc["configuration"]["curve"]["j_invariant"] = "1728"

    result = verify_certificate(_tamper(document, mutate))
    assert not result.ok
    assert result.failed_step == "curve"


def test_tampered_witness_fails(document):
    def mutate(doc):
        doc["configuration"]["independence"]["log_snapshots"][0] = "0.5"

    result = verify_certificate(_tamper(document, mutate))
    assert not result.ok
    assert result.failed_step == "independence"


def test_tampered_point_poly_fails(document):
    def mutate(doc):
        block = doc["configuration"]["associated_points"]["1"]
        block[0]["x_poly"][0] = str(int(block[0]["x_poly"][0]) + 1)

    result = verify_certificate(_tamper(document, mutate))
    assert not result.ok
    assert result.failed_step == "points:on-curve"


def test_wrong_verdict_claim_fails(document):
    def mutate(doc):
        doc["verdict"]["claim"] = "at least 4 real forms"

    result = verify_certificate(_tamper(document, mutate))
    assert not result.ok
    assert result.failed_step == "verdict"


def test_report_contents(document):
    report = render_report(document)
    assert "K^2 = -6" in report
    assert "N = 50" in report
    assert report.count("p_1") >= 5  # block 1 fully listed
    assert "CONTRADICTION" in report
    assert "at least 3 real forms" in report
    # 5r = 15 points listed
    import re

    assert len(re.findall(r"p_\d\d = \(", report)) == 15


# -- CLI ------------------------------------------------------------------------


def test_cli_end_to_end(tmp_path):
    out = tmp_path / "cert.json"
    assert main(["construct", "--r", "3", "--seed", "7", "--out", str(out), "--quiet"]) == 0
    assert main(["verify", str(out), "--quiet"]) == 0
    out2 = tmp_path / "cert2.json"
    assert main(["construct", "--r", "3", "--seed", "7", "--out", str(out2), "--quiet"]) == 0
    assert out.read_bytes() == out2.read_bytes()


def test_cli_report(tmp_path, capsys):
    out = tmp_path / "cert.json"
    main(["construct", "--r", "3", "--seed", "7", "--out", str(out), "--quiet"])
    capsys.readouterr()
    assert main(["report", str(out)]) == 0
    captured = capsys.readouterr()
    assert "K^2 = -6" in captured.out


def test_cli_usage_errors(tmp_path):
    assert main(["construct", "--r", "2", "--quiet"]) == 2
    assert main(["construct", "--r", "3", "--precision-bits", "0", "--quiet"]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["construct"])  # missing required --r
    assert exc.value.code == 2


def test_cli_verify_failure_exit_code(tmp_path):
    out = tmp_path / "cert.json"
    main(["construct", "--r", "3", "--seed", "7", "--out", str(out), "--quiet"])
    doc = json.loads(out.read_text())
    doc["lattice"]["sigma_matrices"]["1"]["rows"][2][0] += 1
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    assert main(["verify", str(bad), "--quiet"]) == 5
    garbage = tmp_path / "garbage.json"
    garbage.write_text("{not json")
    assert main(["verify", str(garbage), "--quiet"]) == 5


def test_load_certificate_errors(tmp_path):
    with pytest.raises(ParseError):
        load_certificate(tmp_path / "missing.json")
    empty = tmp_path / "empty.json"
    empty.write_text("[]")
    with pytest.raises(ParseError):
        load_certificate(empty)


def test_console_entry_point(tmp_path):
    out = tmp_path / "cert.json"
    proc = subprocess.run(
        [sys.executable, "-m", "realforms.cli", "construct", "--r", "3",
         "--seed", "3", "--out", str(out), "--quiet"],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == 0, proc.stderr
    proc = subprocess.run(
        [sys.executable, "-m", "realforms.cli", "verify", str(out)],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.startswith("PASS")
