"""Command-line front end.

Exit status: 0 when every check in the report holds, 1 when a verification
fails, 2 for usage or input errors (message on stderr).
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import boundary, suite
from .errors import BoundcohError, NotABicomplex
from .liecoh import (WEIGHT_CONVENTION, NilradicalAlgebra, build_ce_complex, cohomology_dims,
                     contraction_witness, kostant_verify, zero_weight_check)
from .rootsys import build_root_system
from .specseq import (Bicomplex, BettiTable, LedgerAmbiguity, compute_pages, ledger_solve,
                      stable_page_index, theorem_dims, total_cohomology)
from .weylact import invariants_dim, w0_exterior_action

CARTAN_CONVENTION = "Bourbaki numbering; Cartan entries a_ij = <alpha_i^vee, alpha_j>"
WITNESS_CONVENTION = "contraction witness H = sum of fundamental coweights, alpha(H) = height(alpha)"
SPECTRAL_CONVENTION = ("orientation 'second': E_1 = H(dv), d_r of bidegree (r, 1-r); "
                       "orientation 'first': E_1 = H(dh), d_r of bidegree (1-r, r)")
OMEGA_CONVENTION = f"{boundary.CROSS_RATIO_CONVENTION}; {boundary.OMEGA_FORMULA}"


class UsageError(Exception):
    pass


@dataclass
class Report:
    command: str
    passed: bool
    parameters: dict
    details: dict
    convention_notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"command": self.command, "pass": self.passed, "parameters": self.parameters,
                "details": self.details, "convention_notes": self.convention_notes}

    def to_json(self) -> str:
        return json.dumps(_plain(self.to_dict()), sort_keys=True, indent=2)

    def to_text(self) -> str:
        lines = [f"{self.command}: {'PASS' if self.passed else 'FAIL'}"]
        for k, v in sorted(self.parameters.items()):
            lines.append(f"  {k} = {v}")
        for k, v in sorted(_plain(self.details).items()):
            lines.append(f"  {k}: {json.dumps(v, sort_keys=True)}")
        lines += [f"  note: {n}" for n in self.convention_notes]
        return "\n".join(lines)


def _plain(x):
    """Make a payload JSON-safe: Fractions as 'p/q', numpy scalars as Python numbers, tuple keys as 'a,b'."""
    if isinstance(x, dict):
        return {(",".join(map(str, k)) if isinstance(k, tuple) else str(k)): _plain(v)
                for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, np.ndarray):
        return x.tolist()
    return x


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_kostant(a) -> Report:
    res = kostant_verify(build_root_system(a.type))
    return Report("kostant", res["pass"], {"type": res["type"]}, res,
                  [CARTAN_CONVENTION, WEIGHT_CONVENTION])


def cmd_zero_weight(a) -> Report:
    rs = build_root_system(a.type)
    ce = build_ce_complex(rs)
    check = zero_weight_check(ce)
    h = contraction_witness(rs)
    values = {root_str(r): h.evaluate(tuple(-x for x in r)) for r in rs.positive_roots}
    strict = all(v < 0 for v in values.values())
    details = dict(check, witness_coroot_coeffs=list(h.coroot_coeffs),
                   witness_simple_values=list(h.simple_values()),
                   generator_weights_on_witness=values, strictly_negative=strict)
    return Report("zero-weight", check["ok"] and strict, {"type": rs.name}, details,
                  [CARTAN_CONVENTION, WEIGHT_CONVENTION, WITNESS_CONVENTION])


def root_str(r) -> str:
    return "(" + ",".join(map(str, r)) + ")"


def cmd_weyl_invariants(a) -> Report:
    rs = build_root_system(a.type)
    degrees = [a.q] if a.q is not None else list(range(1, rs.rank + 1))
    fixed = {q: invariants_dim(rs, q) for q in degrees}
    irreducible = rs.datum.irreducible
    expected_zero = [q for q in degrees if q > 0] if irreducible else []
    ok = all(fixed[q] == 0 for q in expected_zero)
    details = {"fixed_dims": fixed, "irreducible": irreducible,
               "asserted_zero_degrees": expected_zero}
    return Report("weyl-invariants", ok, {"type": rs.name, "q": a.q}, details,
                  [CARTAN_CONVENTION, "action on the dual Cartan in the fundamental-weight basis"])


def cmd_w0(a) -> Report:
    rs = build_root_system(a.type)
    actions = [w0_exterior_action(rs, q) for q in range(rs.rank + 1)]
    minus = rs.w0.is_minus_identity()
    ok = all(x.outcome == "parity" for x in actions) if minus else True
    details = {"w0_word": list(rs.w0.word), "w0_minus_identity": minus,
               "flagged_non_scalar": not minus,
               "actions": [x.to_dict() for x in actions]}
    return Report("w0", ok, {"type": rs.name}, details,
                  [CARTAN_CONVENTION, "parity asserted only when w0 = -1; otherwise reported"])


def cmd_ce(a) -> Report:
    alg = NilradicalAlgebra.load(a.algebra)
    jacobi = alg.jacobi_holds()
    ce = build_ce_complex(alg)  # checks d o d = 0 on construction
    coh = cohomology_dims(ce)
    zw = zero_weight_check(ce)
    details = {"dim": alg.dim, "jacobi": jacobi, "square_zero": True,
               "dims": coh.dims, "euler_characteristic": coh.euler_characteristic,
               "by_weight": [[[list(w), h] for w, h in per] for per in coh.by_weight],
               "zero_weight": zw}
    return Report("ce", jacobi and zw["ok"], {"algebra": Path(a.algebra).name}, details,
                  [WEIGHT_CONVENTION])


def _betti(a) -> BettiTable:
    return BettiTable.parse(a.rank, a.betti)


def cmd_dims(a) -> Report:
    t = _betti(a)
    q_max = a.qmax if a.qmax is not None else t.default_qmax()
    dims = theorem_dims(t, q_max)
    return Report("dims", True, {"rank": t.rank, "betti": list(t.betti), "qmax": q_max},
                  {"dims": dims}, ["Betti numbers past the end of the table are zero"])


def cmd_ledger(a) -> Report:
    t = _betti(a)
    q_max = a.qmax if a.qmax is not None else t.default_qmax()
    params = {"rank": t.rank, "betti": list(t.betti), "qmax": q_max}
    notes = ["Betti numbers past the end of the table are zero"]
    try:
        res = ledger_solve(t, q_max)
    except LedgerAmbiguity as exc:
        return Report("ledger", False, params, {"ambiguity": str(exc)}, notes)
    want = theorem_dims(t, q_max)
    details = dict(res.to_json(), theorem=want, agrees_with_theorem=res.dims == want)
    return Report("ledger", res.dims == want, params, details, notes)


def cmd_spectral(a) -> Report:
    b = Bicomplex.load(a.input)
    stable = stable_page_index(b, a.orientation)
    r_max = a.pages if a.pages is not None else stable + 1
    pages = compute_pages(b, a.orientation, r_max)
    tot = total_cohomology(b)
    last = pages[-1]
    converged = last.r >= stable
    sums = last.antidiagonal_sums(len(tot) - 1)
    details = {
        "pages": [{"r": pg.r, "bidegree": list(pg.bidegree), "dims": pg.dim_grid(b.width, b.height),
                   "nonzero_differentials": sorted(list(c) for c, m in pg.differentials.items()
                                                   if not m.is_zero())}
                  for pg in pages],
        "stable_page": stable,
        "total_cohomology": tot,
        "antidiagonal_sums": sums if converged else None,
        "converged": converged,
    }
    ok = sums == tot if converged else True
    return Report("spectral", ok, {"input": Path(a.input).name, "orientation": a.orientation,
                                   "pages": r_max}, details, [SPECTRAL_CONVENTION])


def _load_points(path) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise UsageError(f"{path}: expected a JSON object")
    return data


def _cocycle_from_file(a, params) -> Report:
    data = _load_points(a.input)
    notes = [OMEGA_CONVENTION]
    if a.action == "verify":
        pts = data.get("points")
        if not isinstance(pts, list) or len(pts) != 5:
            raise UsageError("verify input needs 'points': five boundary points")
        arr = np.stack([boundary.BoundaryPoint.of(p).as_array() for p in pts])
        defect, scale = boundary.cocycle_defect_array(arr)
        bound = a.tol * (1 + float(scale))
        details = {"defect": float(defect), "max_abs_omega": float(scale), "bound": bound}
        return Report("cocycle verify", abs(float(defect)) < bound, params, details, notes)
    if a.action == "rogers":
        res = boundary.rogers_residual(data.get("x"), data.get("y"))
        return Report("cocycle rogers", res < a.tol, params, {"residual": res}, notes)
    pts = data.get("points")
    if not isinstance(pts, list) or len(pts) != 4:
        raise UsageError("invariance input needs 'points': four boundary points")
    g = boundary.MobiusPair(data.get("g1", np.eye(2)), data.get("g2", np.eye(2)))
    base = boundary.omega(*pts)
    d = boundary.invariance_defect(g, pts)
    return Report("cocycle invariance", d < a.tol * (1 + abs(base)), params,
                  {"omega": base, "defect": d}, notes)


def cmd_cocycle(a) -> Report:
    params = {"seed": a.seed, "tol": a.tol}
    if a.input:
        params["input"] = Path(a.input).name
        return _cocycle_from_file(a, params)
    n = a.samples if a.samples is not None else {"verify": 10_000}.get(a.action, 1_000)
    params["samples"] = n
    notes = [OMEGA_CONVENTION, f"sampling: ordered points in {boundary.SAMPLE_RANGE}, "
             f"per-block generators seeded by (seed, block) with {boundary.CHUNK} samples per block"]
    if a.action == "verify":
        res = boundary.cocycle_sweep(n, a.seed, a.tol)
        sign = boundary.omega_sign_sweep(min(n, 1_000), a.seed, a.tol)
        sym = boundary.symmetry_sweep(min(n, 1_000), a.seed)
        details = {"cocycle": res, "normalized_sign": sign, "symmetry": sym}
        if sign["sigma"] is not None:
            notes.append(f"Omega(0, x, 1, inf) = {sign['sigma']:+d} * F(x); {boundary.F_FORMULA}")
        return Report("cocycle verify", res["pass"] and sign["pass"] and sym["pass"],
                      params, details, notes)
    if a.action == "rogers":
        res = boundary.rogers_sweep(n, a.seed, a.tol)
        return Report("cocycle rogers", res["pass"], params, res, notes + [boundary.F_FORMULA])
    res = boundary.invariance_sweep(n, a.seed, a.tol)
    return Report("cocycle invariance", res["pass"], params, res, notes)


def cmd_verify_all(a) -> Report:
    if a.max_rank < 1:
        raise UsageError("--max-rank must be positive")
    parts = {
        "kostant": suite.kostant_suite(),
        "zero_weight": suite.zero_weight_suite(),
        "steinberg": suite.steinberg_suite(a.max_rank),
        "w0_parity": suite.w0_suite(),
        "spectral": suite.spectral_suite(),
        "ledger": suite.ledger_suite(),
        "cocycle": suite.cocycle_suite(a.seed, a.tol),
    }
    return Report("verify-all", all(p["pass"] for p in parts.values()),
                  {"max_rank": a.max_rank, "seed": a.seed, "tol": a.tol}, parts,
                  [CARTAN_CONVENTION, WEIGHT_CONVENTION, WITNESS_CONVENTION,
                   SPECTRAL_CONVENTION, OMEGA_CONVENTION])


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")

    parser = _Parser(prog="boundcoh", description="Exact and numerical boundary-cohomology checks.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, fn, help_ in (("kostant", cmd_kostant, "nilradical cohomology vs Weyl lengths"),
                            ("zero-weight", cmd_zero_weight, "zero-weight and contraction checks"),
                            ("w0", cmd_w0, "longest element on exterior powers")):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("--type", required=True)
        p.set_defaults(func=fn)

    p = sub.add_parser("weyl-invariants", parents=[common], help="Weyl invariants in exterior powers")
    p.add_argument("--type", required=True)
    p.add_argument("--q", type=int)
    p.set_defaults(func=cmd_weyl_invariants)

    p = sub.add_parser("ce", parents=[common], help="cohomology of a nilpotent algebra from a file")
    p.add_argument("--algebra", required=True)
    p.set_defaults(func=cmd_ce)

    for name, fn in (("dims", cmd_dims), ("ledger", cmd_ledger)):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--rank", type=int, required=True)
        p.add_argument("--betti", required=True, help="comma-separated b_0,b_1,...")
        p.add_argument("--qmax", type=int)
        p.set_defaults(func=fn)

    p = sub.add_parser("spectral", parents=[common], help="pages of a bicomplex from a file")
    p.add_argument("--input", required=True)
    p.add_argument("--orientation", choices=("first", "second"), default="second")
    p.add_argument("--pages", type=int)
    p.set_defaults(func=cmd_spectral)

    p = sub.add_parser("cocycle", parents=[common], help="numerical checks of the boundary cocycle")
    p.add_argument("action", choices=("verify", "rogers", "invariance"))
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--input", help="JSON file with an explicit configuration instead of sampling")
    p.set_defaults(func=cmd_cocycle)

    p = sub.add_parser("verify-all", parents=[common], help="run every acceptance workload")
    p.add_argument("--max-rank", type=int, default=4)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_verify_all)
    return parser


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "samples", None) is not None and args.samples < 1:
            raise UsageError("--samples must be positive")
        report = args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=err)
        return 2
    except NotABicomplex as exc:
        print(f"error: not a bicomplex: {exc.identity} fails at {exc.cell}", file=err)
        return 2
    except (BoundcohError, OSError, KeyError, TypeError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=err)
        return 2
    print(report.to_json() if args.format == "json" else report.to_text(), file=out)
    return 0 if report.passed else 1


def main(argv=None) -> int:
    return run(argv)
