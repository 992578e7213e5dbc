"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Also runnable directly: ``python3 tests/test_acceptance.py``.
"""
import io
import sys
import time
from pathlib import Path

import pytest

from boundcoh import suite
from boundcoh.cli import run

DATA = Path(__file__).parent / "data"


def _line(number, title, ok, seconds, extra=""):
    status = "PASS" if ok else "FAIL"
    return f"[acceptance {number}] {status}  {title}  ({seconds:.1f}s){'  ' + extra if extra else ''}"


@pytest.fixture
def emit(capsys):
    def _emit(text):
        with capsys.disabled():
            print("\n" + text)
    return _emit


def criterion_1():
    res = suite.kostant_suite()
    hist = {t: r["weyl_histogram"] for t, r in res["types"].items()}
    return res["pass"], f"histograms {hist}"


def criterion_2():
    res = suite.zero_weight_suite()
    return res["pass"], f"types {sorted(res['types'])}"


def criterion_3():
    res = suite.steinberg_suite(4)
    return res["pass"], f"{len(res['types'])} irreducible types of rank <= 4"


def criterion_4():
    res = suite.w0_suite()
    flagged = {t: [a["outcome"] for a in f["actions"]] for t, f in res["flagged"].items()}
    return res["pass"], f"flagged {flagged}"


def criterion_5():
    res = suite.spectral_suite(200, seed=0)
    return res["pass"], f"{res['count']} bicomplexes x 2 orientations, {len(res['failures'])} failures"


def criterion_6():
    res = suite.ledger_suite(range(1, 7), 100, seed=0)
    return res["pass"], f"{res['tables_checked']} tables, rank-2 dims {res['rank2_dims']}"


def criterion_7():
    res = suite.cocycle_suite(seed=42, tol=1e-9)
    p = res["parts"]
    summary = (f"cocycle {p['cocycle']['max_abs_defect']:.1e}, rogers {p['rogers']['max_residual']:.1e}, "
               f"invariance {p['invariance']['max_relative_defect']:.1e}, "
               f"symmetry {p['symmetry']['max_symmetry_residual']:.1e}, sigma {p['sign']['sigma']}")
    return res["pass"], summary


DETERMINISM_COMMANDS = [
    ["kostant", "--type", "A3"],
    ["zero-weight", "--type", "G2"],
    ["weyl-invariants", "--type", "B3"],
    ["w0", "--type", "A2"],
    ["ce", "--algebra", str(DATA / "heisenberg.json")],
    ["dims", "--rank", "3", "--betti", "1,0,0,1"],
    ["ledger", "--rank", "2", "--betti", "1,0,2,0,1"],
    ["spectral", "--input", str(DATA / "staircase.json"), "--orientation", "second"],
    ["cocycle", "verify", "--seed", "42"],
    ["cocycle", "rogers", "--seed", "42"],
    ["cocycle", "invariance", "--seed", "42"],
    ["verify-all", "--max-rank", "4"],
]


def _json_output(argv):
    out = io.StringIO()
    code = run(argv, out=out, err=io.StringIO())
    return code, out.getvalue().encode()


def criterion_8():
    bad = []
    for argv in DETERMINISM_COMMANDS:
        a, b = _json_output(argv), _json_output(argv)
        if a != b or not a[1]:
            bad.append(argv[0])
    return not bad, f"{len(DETERMINISM_COMMANDS)} commands run twice" + (f", differing: {bad}" if bad else "")


CRITERIA = [
    (1, "Kostant: CE cohomology = Weyl length histogram", criterion_1),
    (2, "zero weight absent, weights negative on contraction witness", criterion_2),
    (3, "Steinberg: no Weyl invariants in positive exterior degrees", criterion_3),
    (4, "w0 acts by (-1)^q when w0 = -1", criterion_4),
    (5, "spectral engine: E_infinity sums = total cohomology", criterion_5),
    (6, "ledger = closed-form dimensions", criterion_6),
    (7, "cocycle, five-term, invariance, symmetry, sign", criterion_7),
    (8, "byte-identical JSON reports", criterion_8),
]


@pytest.mark.parametrize("number,title,check", CRITERIA, ids=[f"criterion_{n}" for n, _, _ in CRITERIA])
def test_criterion(number, title, check, emit):
    start = time.perf_counter()
    ok, extra = check()
    emit(_line(number, title, ok, time.perf_counter() - start, extra))
    assert ok


if __name__ == "__main__":
    failed = 0
    for number, title, check in CRITERIA:
        start = time.perf_counter()
        ok, extra = check()
        failed += not ok
        print(_line(number, title, ok, time.perf_counter() - start, extra), flush=True)
    sys.exit(1 if failed else 0)
