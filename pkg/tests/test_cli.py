import csv
import io
import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from hardyberg import cli
from hardyberg.integrate import IntegralResult, QuadratureError

SCHEMA = json.loads(resources.files("hardyberg").joinpath("data/output_schema.json").read_text())


def validate(obj, kind=None):
    schema = SCHEMA if kind is None else {"$schema": SCHEMA["$schema"], "$defs": SCHEMA["$defs"], "$ref": f"#/$defs/{kind}"}
    jsonschema.validate(obj, schema)


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    status = cli.run(list(argv), out, err)
    return status, out.getvalue(), err.getvalue()


def run_json(kind, *argv, expect=0):
    status, out, err = run(*argv)
    assert status == expect, err
    obj = json.loads(out)
    validate(obj, kind)
    validate(obj)
    return obj


def test_classify_json_is_bare_verdict():
    status, out, _ = run("classify", "--source", "H:1", "--target", "A:2:0", "--n", "1")
    assert status == 0
    assert json.loads(out) == {"contains": True, "compact": False, "equal": False, "basis": "ThmA.b"}
    validate(json.loads(out), "classify")


def test_classify_not_contained_has_null_compact():
    obj = run_json("classify", "classify", "--source", "H:1", "--target", "A:3:0", "--n", "1")
    assert obj["contains"] is False and obj["compact"] is None


@pytest.mark.parametrize("fmt", ["csv", "pretty"])
def test_classify_other_formats(fmt):
    status, out, _ = run("classify", "--source", "H:2", "--target", "A:2:-1", "--n", "2", "--format", fmt)
    assert status == 0
    assert "Lemma11.b" in out
    if fmt == "csv":
        assert "\r" not in out
        row = next(csv.DictReader(io.StringIO(out)))
        assert row["equal"] == "True"


def test_growth_and_tight():
    obj = run_json("growth", "growth", "--space", "A:2:1", "--n", "2")
    assert obj["kind"] == "power" and obj["exponent"] == 2.0
    obj = run_json("growth", "growth", "--space", "A:1:-3", "--n", "1")
    assert obj["kind"] == "logarithmic" and obj["exponent"] is None
    obj = run_json("tight", "tight", "--source", "A:2:0", "--target", "A:4:3", "--n", "2")
    assert obj["is_tight"] and obj["status"] == "conjectured" and obj["extremal_exponent"] == 3.0


def test_norm_command(tmp_path):
    obj = run_json("norm", "norm", "--space", "A:2:0", "--n", "1", "--f", "mono:1")
    assert obj["value"] == pytest.approx(0.5**0.5, rel=1e-10)
    assert obj["converged"] is True
    path = tmp_path / "f.json"
    path.write_text(json.dumps({"kind": "poly", "n": 1, "coeffs": [[[0], [2.0, 0.0]]]}))
    obj = run_json("norm", "norm", "--space", "H:3", "--n", "1", "--f", f"@{path}")
    assert obj["value"] == pytest.approx(2.0)


def test_witness_json_and_csv():
    args = ["witness", "--source", "H:1", "--target", "A:2:0", "--n", "1", "--a-grid", "0.5,0.9", "--directions", "1"]
    obj = run_json("sweep", *args)
    assert obj["verdict"] == "pass" and obj["command"] == "witness" and obj["seed"] == 0
    status, out, _ = run(*args, "--format", "csv")
    assert status == 0 and "\r" not in out
    rows = list(csv.DictReader(io.StringIO(out)))
    assert {"value", "reference", "deviation", "tol", "pass", "basis", "seed"} <= set(rows[0])
    assert all(r["pass"] == "1" for r in rows)


def test_fr_sweep_pass_and_fail():
    obj = run_json("sweep", "fr-sweep", "--alpha", "0", "--t", "1", "--n", "1")
    assert obj["verdict"] == "pass"
    # a starved rule cannot converge, so the table fails and the exit status is 1
    obj = run_json("sweep", "fr-sweep", "--alpha", "0", "--t", "1", "--n", "1", "--max-refine", "0", "--rel-tol", "1e-15", expect=1)
    assert obj["verdict"] == "fail"


def test_region_sweep():
    obj = run_json("sweep", "region-sweep", "--t", "1", "--n", "1")
    assert obj["verdict"] == "pass"


def test_contract_extremal_carleson():
    obj = run_json("sweep", "contract", "--source", "H:1", "--target", "A:2:0", "--n", "1", "--samples", "5", "--seed", "4")
    assert obj["seed"] == 4 and obj["metadata"]["seed"] == 4
    run_json("sweep", "extremal", "--source", "H:1", "--target", "A:2:0", "--n", "1", "--a-grid", "0,0.5")
    obj = run_json("sweep", "carleson", "--p", "2", "--q", "1", "--alpha", "0", "--mc-samples", "50000")
    assert obj["diagnostics"]["classifier_contains"] is True


def test_verify_all_subset():
    obj = run_json("verify", "verify-all", "--quick", "--only", "1")
    assert obj["verdict"] == "pass"
    assert [c["number"] for c in obj["criteria"]] == [1]
    status, out, _ = run("verify-all", "--quick", "--only", "1", "--format", "pretty")
    assert status == 0 and out.startswith("[PASS] criterion 1:")


@pytest.mark.parametrize(
    "argv",
    [
        ["classify", "--source", "H:0", "--target", "A:2:0", "--n", "1"],
        ["classify", "--source", "H:1", "--target", "A:2:0", "--n", "0"],
        ["classify", "--source", "H:1", "--target", "A:2:0"],
        ["growth", "--space", "X:1", "--n", "1"],
        ["nope"],
    ],
)
def test_argument_errors_exit_2(argv, capsys):
    status, out, _ = run(*argv)
    assert status == 2 and out == ""
    assert "usage:" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        ["witness", "--source", "H:1", "--target", "A:3:0", "--n", "1"],
        ["extremal", "--source", "A:2:0", "--target", "A:4:2", "--n", "2"],
        ["norm", "--space", "H:2", "--n", "2", "--f", "mono:1"],
        ["norm", "--space", "H:2", "--n", "1", "--f", "@/nonexistent.json"],
        ["classify", "--source", "H:1", "--target", "A:2:0", "--n", "1", "--angular-nodes", "2"],
        ["witness", "--source", "H:1", "--target", "A:2:0", "--n", "1", "--a-grid", "0.5,0.999"],
    ],
)
def test_precondition_errors_exit_2(argv):
    status, out, err = run(*argv)
    assert status == 2 and out == ""
    assert err.startswith("usage:") and "error:" in err


def test_numeric_error_exit_1(monkeypatch):
    def broken(*a, **k):
        raise QuadratureError("H^2", IntegralResult(0.5, None, 1024, False))

    monkeypatch.setattr(cli, "norm_result", broken)
    obj = run_json("numeric_error", "norm", "--space", "H:2", "--n", "1", "--f", "const:1", expect=1)
    assert obj["error"] == "QuadratureError" and obj["nodes_used"] == 1024


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "hardyberg", "classify", "--source", "A:2:0", "--target", "H:2", "--n", "1"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["contains"] is False
