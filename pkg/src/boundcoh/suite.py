"""The acceptance workloads, shared by ``verify-all`` and the test-suite.

Each function returns a plain dict with a boolean ``pass`` and enough detail
to see what was compared.
"""
from __future__ import annotations

import random

from . import boundary
from .liecoh import build_ce_complex, contraction_witness, kostant_verify, zero_weight_check
from .rootsys import build_root_system
from .specseq import (BettiTable, e_infinity, ledger_solve, random_bicomplex, theorem_dims,
                      total_cohomology)
from .weylact import invariants_dim, invariants_dims_by_character, w0_exterior_action

KOSTANT_TYPES = ("A1", "A2", "A3", "B2", "C3", "G2", "A1xA1")
PARITY_TYPES = ("A1", "B2", "C3", "G2", "B3", "D4")
NON_SCALAR_TYPES = ("A2", "A3")
KNOWN_HISTOGRAMS = {"A2": [1, 2, 2, 1], "A3": [1, 3, 5, 6, 5, 3, 1], "B2": [1, 2, 2, 2, 1]}


def irreducible_types(max_rank: int) -> list[str]:
    out = [f"A{n}" for n in range(1, max_rank + 1)]
    out += [f"B{n}" for n in range(2, max_rank + 1)]
    out += [f"C{n}" for n in range(2, max_rank + 1)]
    out += [f"D{n}" for n in range(4, max_rank + 1)]
    if max_rank >= 2:
        out.append("G2")
    if max_rank >= 4:
        out.append("F4")
    out += [f"E{n}" for n in (6, 7, 8) if n <= max_rank]
    return out


def kostant_suite(types=KOSTANT_TYPES) -> dict:
    rows = {}
    for t in types:
        res = kostant_verify(build_root_system(t))
        ok = res["pass"]
        if t in KNOWN_HISTOGRAMS:
            ok = ok and res["weyl_histogram"] == KNOWN_HISTOGRAMS[t]
        rows[t] = {"dims": res["dims"], "weyl_histogram": res["weyl_histogram"],
                   "sigma": res["sigma"], "multiplicity_one": res["multiplicity_one"], "pass": ok}
    return {"types": rows, "pass": all(r["pass"] for r in rows.values())}


def zero_weight_suite(types=KOSTANT_TYPES) -> dict:
    rows = {}
    for t in types:
        rs = build_root_system(t)
        ce = build_ce_complex(rs)
        check = zero_weight_check(ce)
        h = contraction_witness(rs)
        worst = max(h.evaluate(b.weight)
                    for q in range(1, ce.top_degree + 1) for b in ce.blades_by_degree[q])
        rows[t] = {"offending_degrees": check["offending_degrees"],
                   "max_weight_on_witness": str(worst),
                   "witness_simple_values": [str(x) for x in h.simple_values()],
                   "pass": check["ok"] and worst < 0}
    return {"types": rows, "pass": all(r["pass"] for r in rows.values())}


PROJECTOR_MAX_RANK = 4


def steinberg_suite(max_rank: int = 4) -> dict:
    """Averaging projector up to rank 4; above that the average character (same number, far cheaper)."""
    rows = {}
    for t in irreducible_types(max_rank):
        rs = build_root_system(t)
        if rs.rank <= PROJECTOR_MAX_RANK:
            fixed, method = [invariants_dim(rs, q) for q in range(1, rs.rank + 1)], "projector"
        else:
            fixed, method = invariants_dims_by_character(rs)[1:], "character"
        rows[t] = {"fixed_dims": fixed, "method": method, "pass": not any(fixed)}
    return {"max_rank": max_rank, "types": rows, "pass": all(r["pass"] for r in rows.values())}


def w0_suite(parity_types=PARITY_TYPES, flagged=NON_SCALAR_TYPES) -> dict:
    rows = {}
    for t in parity_types:
        rs = build_root_system(t)
        outcomes = [w0_exterior_action(rs, q).outcome for q in range(rs.rank + 1)]
        rows[t] = {"minus_identity": rs.w0.is_minus_identity(), "outcomes": outcomes,
                   "pass": rs.w0.is_minus_identity() and all(o == "parity" for o in outcomes)}
    flags = {}
    for t in flagged:
        rs = build_root_system(t)
        flags[t] = {"minus_identity": rs.w0.is_minus_identity(),
                    "actions": [w0_exterior_action(rs, q).to_dict() for q in range(rs.rank + 1)]}
    return {"types": rows, "flagged": flags, "pass": all(r["pass"] for r in rows.values())}


def spectral_suite(count: int = 200, seed: int = 0) -> dict:
    failures = []
    for s in range(seed, seed + count):
        b = random_bicomplex(random.Random(s))
        tot = total_cohomology(b)
        for orientation in ("first", "second"):
            inf = e_infinity(b, orientation)
            sums = inf.antidiagonal_sums(len(tot) - 1)
            if sums != tot:
                failures.append({"seed": s, "orientation": orientation,
                                 "e_infinity": sums, "total": tot})
    return {"count": count, "first_seed": seed, "orientations": ["first", "second"],
            "failures": failures, "pass": not failures}


def random_betti(rng: random.Random, rank: int) -> BettiTable:
    return BettiTable(rank, (1,) + tuple(rng.randrange(0, 6) for _ in range(rank + 4)))


def ledger_suite(ranks=range(1, 7), tables: int = 100, seed: int = 0) -> dict:
    rng = random.Random(seed)
    mismatches = []
    for r in ranks:
        for _ in range(tables):
            t = random_betti(rng, r)
            got = ledger_solve(t).dims
            want = theorem_dims(t)
            if got != want:
                mismatches.append({"table": t.to_json(), "ledger": got, "theorem": want})
    rank1 = random_betti(random.Random(seed), 1)
    rank1_ok = all(ledger_solve(rank1).dims[q] == rank1.b(q) for q in range(1, rank1.default_qmax() + 1))
    sl2 = ledger_solve(BettiTable(2, (1, 0, 2, 0, 1))).dims
    sl2_ok = sl2[3] == 1 and sl2[4] == 2 and all(d == 0 for q, d in sl2.items() if q >= 5)
    return {"tables_checked": len(list(ranks)) * tables, "mismatches": mismatches[:5],
            "mismatch_count": len(mismatches), "rank1_unchanged": rank1_ok,
            "rank2_dims": {str(k): v for k, v in sl2.items()}, "rank2_ok": sl2_ok,
            "pass": not mismatches and rank1_ok and sl2_ok}


def cocycle_suite(seed: int = 42, tol: float = 1e-9) -> dict:
    parts = {
        "cocycle": boundary.cocycle_sweep(10_000, seed, tol),
        "rogers": boundary.rogers_sweep(1_000, seed, tol),
        "invariance": boundary.invariance_sweep(1_000, seed, tol),
        "symmetry": boundary.symmetry_sweep(1_000, seed, 1e-12),
        "sign": boundary.omega_sign_sweep(1_000, seed, tol),
    }
    for p in parts.values():
        p.pop("worst_witness", None)
    return {"seed": seed, "tol": tol, "parts": parts, "pass": all(p["pass"] for p in parts.values())}
