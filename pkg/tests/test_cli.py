import io
import json
from pathlib import Path

import pytest

from leonard24 import __version__
from leonard24.cli import SCHEMA, main

INSTANCES = Path(__file__).resolve().parent.parent / "instances"


def run(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out=out)
    return code, out.getvalue()


def write(tmp_path, data, name="p.json"):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return p


GOOD = {"d": 2, "field": "rational", "theta": ["1", "3", "7"], "theta_star": ["-2", "-1", "0"],
        "varphi": ["-3", "-5"], "phi": ["3", "1"]}


def test_validate_ok():
    code, out = run("validate", INSTANCES / "affine_d3.json")
    assert code == 0
    assert "PASS: Leonard system" in out
    assert "phi matches" in out


def test_validate_gf101():
    code, _ = run("validate", INSTANCES / "affine_d3_gf101.json")
    assert code == 0


def test_validate_repeated_theta(tmp_path, capsys):
    code, out = run("validate", write(tmp_path, dict(GOOD, theta=["1", "1", "7"])))
    assert code == 1
    assert "theta-distinct" in out + capsys.readouterr().err


def test_validate_zero_varphi(tmp_path, capsys):
    code, out = run("validate", write(tmp_path, dict(GOOD, varphi=["0", "-5"])))
    assert code == 1
    assert "varphi-nonzero" in out + capsys.readouterr().err


def test_validate_wrong_phi_is_reported(tmp_path):
    code, out = run("validate", write(tmp_path, dict(GOOD, phi=["3", "2"])))
    assert code == 1
    assert "phi" in out


@pytest.mark.parametrize("data", [
    {k: v for k, v in GOOD.items() if k != "theta"},
    dict(GOOD, varphi=["-3"]),
    dict(GOOD, theta=["1", "x", "7"]),
])
def test_malformed_input(tmp_path, data):
    code, _ = run("validate", write(tmp_path, data))
    assert code == 2


def test_missing_file(tmp_path):
    assert run("validate", tmp_path / "nope.json")[0] == 2


def test_transition_identity():
    code, out = run("transition", INSTANCES / "quadratic_d2.json",
                    "--from", "E.fwd.xis0", "--to", "E.fwd.xis0")
    assert code == 0
    assert "eq:Eivs0toXivs0 (X = E)" in out
    assert "oracle check: match" in out


@pytest.mark.parametrize("emit", ["matrix", "formula"])
def test_transition_emit(emit):
    code, out = run("transition", INSTANCES / "qtype_d4.json", "--from", "etaAs.rev.xid",
                    "--to", "tauA.fwd.xis0", "--emit", emit)
    assert code == 0
    assert ("T =\n" in out) == (emit == "matrix")
    assert ("sum_r" in out) == (emit == "formula")


def test_transition_bad_tag(capsys):
    code, _ = run("transition", INSTANCES / "quadratic_d2.json", "--from", "bogus",
                    "--to", "E.fwd.xis0")
    assert code == 2
    assert "tauA.fwd.xis0" in capsys.readouterr().err  # lists the legal tags


def test_transition_seed_anchors():
    code, _ = run("transition", INSTANCES / "quadratic_d2.json", "--from", "E.fwd.xis0",
                  "--to", "Es.rev.xid", "--seed-anchors", "1,2,3")
    assert code == 0
    assert run("transition", INSTANCES / "quadratic_d2.json", "--from", "E.fwd.xis0",
               "--to", "Es.rev.xid", "--seed-anchors", "1,2")[0] == 2


def test_verify_subset():
    code, out = run("verify", INSTANCES / "quadratic_d2.json", "--suites", "transitions")
    assert code == 0
    assert "576/576 transition formulas match the oracle" in out
    assert "identities" not in out
    assert run("verify", INSTANCES / "quadratic_d2.json", "--suites", "nope")[0] == 2


def test_verify_json(tmp_path):
    path = tmp_path / "report.json"
    code, _ = run("verify", INSTANCES / "affine_d3.json", "--relatives", "--json", path)
    assert code == 0
    report = json.loads(path.read_text())
    assert report["schema"] == SCHEMA
    assert report["version"] == __version__
    assert report["passed"] is True
    assert len(report["systems"]) == 8
    names = [r["name"] for r in report["systems"][0]["results"]]
    assert names == ["axioms", "bases", "d4", "identities", "scalar", "transitions"]


def test_verify_rescale_check():
    code, out = run("verify", INSTANCES / "quadratic_d2.json", "--suites", "transitions",
                    "--rescale-check")
    assert code == 0


def test_orbit():
    code, out = run("orbit", INSTANCES / "quadratic_d2.json")
    assert code == 0
    assert out.count("theta_star") == 8
    # ddown reverses theta and keeps the split sequences' roles
    block = out.split("Φ⇓ ")[1]
    assert "theta      = [7, 3, 1]" in block
    assert "varphi     = [3, 1]" in block
