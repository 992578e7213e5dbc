import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from boundcoh.cli import run

DATA = Path(__file__).parent / "data"


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def report(*argv):
    code, out, _ = call(*argv)
    return code, json.loads(out)


def test_kostant_a2():
    code, rep = report("kostant", "--type", "A2")
    assert code == 0 and rep["pass"]
    assert rep["details"]["weyl_histogram"] == [1, 2, 2, 1]
    assert set(rep) == {"command", "pass", "parameters", "details", "convention_notes"}


def test_dims_sl2_squared():
    code, rep = report("dims", "--rank", "2", "--betti", "1,0,2,0,1")
    assert code == 0
    assert rep["details"]["dims"]["3"] == 1
    assert rep["parameters"]["qmax"] == 6


def test_ledger_agrees():
    code, rep = report("ledger", "--rank", "2", "--betti", "1,0,2,0,1", "--qmax", "5")
    assert code == 0 and rep["details"]["agrees_with_theorem"]


def test_degenerate_cocycle_input_is_usage_error():
    code, out, err = call("cocycle", "verify", "--samples", "10", "--seed", "42", "--tol", "1e-9",
                          "--input", str(DATA / "degenerate_quintuple.json"))
    assert code == 2 and out == "" and "coincide" in err


def test_cocycle_verify_file_ok(tmp_path):
    f = tmp_path / "pts.json"
    f.write_text(json.dumps({"points": [[-2, -1], [0, 0.5], [1, 2], [3, 4], ["inf", "inf"]]}))
    code, rep = report("cocycle", "verify", "--input", str(f))
    assert code == 0 and abs(rep["details"]["defect"]) < 1e-12


def test_mixed_order_configuration_is_domain_error(tmp_path):
    f = tmp_path / "pts.json"
    f.write_text(json.dumps({"points": [[0, 0], [2, 1], [1, 2], [3, 3], [4, 4]]}))
    assert call("cocycle", "verify", "--input", str(f))[0] == 2


@pytest.mark.parametrize("action", ["verify", "rogers", "invariance"])
def test_cocycle_sweeps(action):
    code, rep = report("cocycle", action, "--samples", "300", "--seed", "7")
    assert code == 0 and rep["pass"]
    assert rep["parameters"] == {"samples": 300, "seed": 7, "tol": 1e-9}


def test_tolerance_can_force_failure():
    code, rep = report("cocycle", "rogers", "--samples", "200", "--tol", "1e-30")
    assert code == 1 and not rep["pass"]


def test_zero_weight_counterexample_fails_verification():
    code, rep = report("ce", "--algebra", str(DATA / "zero_weight_pair.json"))
    assert code == 1
    assert rep["details"]["zero_weight"]["offending_degrees"] == [2]


def test_ce_heisenberg():
    code, rep = report("ce", "--algebra", str(DATA / "heisenberg.json"))
    assert code == 0 and rep["details"]["dims"] == [1, 2, 2, 1]


def test_spectral_staircase():
    code, rep = report("spectral", "--input", str(DATA / "staircase.json"), "--orientation", "second")
    assert code == 0
    assert rep["details"]["total_cohomology"] == [0] * 5
    assert rep["details"]["pages"][1]["nonzero_differentials"] == [[0, 1]]


def test_spectral_rejects_commuting_square():
    code, _, err = call("spectral", "--input", str(DATA / "commuting_square.json"),
                        "--orientation", "first")
    assert code == 2 and "dh.dv + dv.dh = 0" in err


def test_w0_flags_non_scalar():
    code, rep = report("w0", "--type", "A3")
    assert code == 0 and rep["details"]["flagged_non_scalar"]
    code, rep = report("w0", "--type", "B3")
    assert code == 0 and [a["outcome"] for a in rep["details"]["actions"]] == ["parity"] * 4


def test_weyl_invariants():
    code, rep = report("weyl-invariants", "--type", "G2", "--q", "2")
    assert code == 0 and rep["details"]["fixed_dims"] == {"2": 0}
    assert call("weyl-invariants", "--type", "G2", "--q", "3")[0] == 2


@pytest.mark.parametrize("argv", [
    [], ["bogus"], ["kostant"], ["kostant", "--type", "Q3"], ["kostant", "--type", "A9"],
    ["dims", "--rank", "2", "--betti", "0,1"], ["dims", "--rank", "x", "--betti", "1"],
    ["spectral", "--input", "/nonexistent.json"], ["cocycle", "verify", "--samples", "0"],
    ["kostant", "--type", "A2", "--format", "xml"],
])
def test_usage_errors(argv):
    code, out, err = call(*argv)
    assert code == 2 and out == "" and err


@pytest.mark.parametrize("argv", [
    ["kostant", "--type", "B2"], ["zero-weight", "--type", "G2"], ["w0", "--type", "A2"],
    ["weyl-invariants", "--type", "A3"], ["dims", "--rank", "3", "--betti", "1,0,0,1"],
    ["ledger", "--rank", "3", "--betti", "1,0,0,1"], ["cocycle", "invariance", "--samples", "50"],
])
def test_text_format(argv):
    code, out, _ = call(*argv, "--format", "text")
    assert code == 0 and out.splitlines()[0].endswith("PASS")


@pytest.mark.parametrize("argv", [
    ["kostant", "--type", "C3"],
    ["cocycle", "verify", "--samples", "2000", "--seed", "9"],
    ["spectral", "--input", str(DATA / "staircase.json"), "--orientation", "first"],
    ["ledger", "--rank", "4", "--betti", "1,0,0,3,0,0,1"],
])
def test_json_is_byte_identical(argv):
    first, second = call(*argv)[1], call(*argv)[1]
    assert first == second
    assert first.encode() == second.encode()


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "boundcoh", "dims", "--rank", "2", "--betti", "1,0,2,0,1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["details"]["dims"]["4"] == 2
