"""Chevalley-Eilenberg cohomology of nilradicals, graded by torus weight.

The nilradical is spanned by generators ``e_{-a}`` for the positive roots
``a``; generator ``k`` carries weight ``-a_k`` (simple-root coordinates).
A blade ``(i_1 < ... < i_q)`` labels the dual basis element
``e^{i_1} ^ ... ^ e^{i_q}`` of the q-th exterior power of the dual, and its
recorded weight is the sum of the generator weights.  The actual torus weight
of the cochain is the negative of that label; every report states which one
it lists.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Mapping, Sequence

from .errors import BoundcohError, ComplexViolation
from .ratlin import RationalMatrix, as_rational, kernel_basis, rank, solve_in_span, span_basis
from .rootsys import RootSystem

MAX_RANK = 6

WEIGHT_CONVENTION = (
    "blade weight = sum of generator weights, generator e_{-a} has weight -a "
    "(simple-root coordinates); the torus acts on the dual cochain with the opposite sign"
)


def _vadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


@dataclass
class NilradicalAlgebra:
    """Finite-dimensional graded Lie algebra given by structure constants.

    ``brackets[(i, j)]`` lists ``(k, c)`` with ``[e_i, e_j] = sum c e_k``; only
    ``i < j`` needs to be supplied, the opposite order is filled in.
    """
    weights: list[tuple[int, ...]]
    brackets: dict[tuple[int, int], list[tuple[int, Fraction]]] = field(default_factory=dict)
    labels: list[str] | None = None

    def __post_init__(self):
        self.weights = [tuple(int(x) for x in w) for w in self.weights]
        if len({len(w) for w in self.weights}) > 1:
            raise BoundcohError("weights have inconsistent lengths")
        full = {}
        for (i, j), terms in self.brackets.items():
            if not (0 <= i < self.dim and 0 <= j < self.dim):
                raise BoundcohError(f"bracket index out of range: ({i}, {j})")
            if i == j:
                if any(as_rational(c) for _, c in terms):
                    raise BoundcohError(f"[e_{i}, e_{i}] must vanish")
                continue
            clean = [(int(k), as_rational(c)) for k, c in terms if as_rational(c)]
            for k, _ in clean:
                if not 0 <= k < self.dim:
                    raise BoundcohError(f"bracket target out of range: {k}")
            if (i, j) in full:
                if sorted(full[(i, j)]) != sorted(clean):
                    raise BoundcohError(f"brackets ({i},{j}) and ({j},{i}) are not antisymmetric")
                continue
            full[(i, j)] = clean
            full[(j, i)] = [(k, -c) for k, c in clean]
        self.brackets = full
        for (i, j), terms in full.items():
            for k, _ in terms:
                if self.weights[k] != _vadd(self.weights[i], self.weights[j]):
                    raise BoundcohError(
                        f"[e_{i}, e_{j}] has a component on e_{k} of the wrong weight")

    @property
    def dim(self) -> int:
        return len(self.weights)

    @property
    def weight_rank(self) -> int:
        return len(self.weights[0]) if self.weights else 0

    def bracket(self, i: int, j: int) -> list[tuple[int, Fraction]]:
        return self.brackets.get((i, j), [])

    def jacobi_holds(self) -> bool:
        n = self.dim
        for x, y, z in combinations(range(n), 3):
            tot: dict[int, Fraction] = {}
            for a, b, c in ((x, y, z), (y, z, x), (z, x, y)):
                for k, c1 in self.bracket(a, b):
                    for m, c2 in self.bracket(k, c):
                        tot[m] = tot.get(m, 0) + c1 * c2
            if any(tot.values()):
                return False
        return True

    def is_nilpotent(self) -> bool:
        """Lower central series reaches zero."""
        current = span_basis([tuple(Fraction(int(i == k)) for i in range(self.dim))
                              for k in range(self.dim)], self.dim)
        for _ in range(self.dim + 1):
            if not current:
                return True
            images = []
            for v in current:
                for j in range(self.dim):
                    out = [Fraction(0)] * self.dim
                    for i, c in enumerate(v):
                        if c:
                            for k, ck in self.bracket(i, j):
                                out[k] += c * ck
                    if any(out):
                        images.append(tuple(out))
            current = span_basis(images, self.dim)
        return not current

    # constructors -----------------------------------------------------------
    @classmethod
    def from_root_system(cls, rs: RootSystem) -> "NilradicalAlgebra":
        pos = list(rs.positive_roots)
        index = {r: k for k, r in enumerate(pos)}
        brackets = {}
        for i, a in enumerate(pos):
            for j in range(i + 1, len(pos)):
                b = pos[j]
                s = tuple(x + y for x, y in zip(a, b))
                if s in index:
                    # [e_{-a}, e_{-b}] = N_{-a,-b} e_{-a-b}
                    brackets[(i, j)] = [(index[s], Fraction(rs.structure_constant(
                        tuple(-x for x in a), tuple(-x for x in b))))]
        from .rootsys import root_name
        return cls([tuple(-x for x in a) for a in pos], brackets,
                   labels=[f"e_{{-({root_name(a)})}}" for a in pos])

    @classmethod
    def from_json(cls, data: Mapping) -> "NilradicalAlgebra":
        try:
            n = int(data["dim"])
            weights = [tuple(int(x) for x in w) for w in data["weights"]]
            if len(weights) != n:
                raise BoundcohError(f"dim {n} but {len(weights)} weights given")
            brackets = {}
            for entry in data.get("brackets", []):
                key = (int(entry["i"]), int(entry["j"]))
                brackets[key] = [(int(t["k"]), as_rational(str(t["c"]))) for t in entry["terms"]]
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            if isinstance(exc, BoundcohError):
                raise
            raise BoundcohError(f"malformed algebra file: {exc}") from exc
        return cls(weights, brackets)

    @classmethod
    def load(cls, path) -> "NilradicalAlgebra":
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise BoundcohError(f"{path}: invalid JSON ({exc})") from exc
        return cls.from_json(data)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "weights": [list(w) for w in self.weights],
            "brackets": [
                {"i": i, "j": j, "terms": [{"k": k, "c": str(c)} for k, c in terms]}
                for (i, j), terms in sorted(self.brackets.items()) if i < j and terms
            ],
        }


@dataclass(frozen=True)
class Blade:
    indices: tuple[int, ...]
    weight: tuple[int, ...]


@dataclass
class WeightBlock:
    """Differential d_q restricted to one weight: sources in degree q, targets in q+1."""
    weight: tuple[int, ...]
    sources: list[Blade]
    targets: list[Blade]
    matrix: RationalMatrix


class CEComplex:
    """Weight-graded Chevalley-Eilenberg cochain complex with trivial coefficients."""

    def __init__(self, algebra: NilradicalAlgebra):
        self.algebra = algebra
        n = algebra.dim
        zero = tuple([0] * algebra.weight_rank)
        self.blades_by_degree: list[list[Blade]] = []
        for q in range(n + 1):
            blades = []
            for idx in combinations(range(n), q):
                w = zero
                for i in idx:
                    w = _vadd(w, algebra.weights[i])
                blades.append(Blade(idx, w))
            self.blades_by_degree.append(blades)
        self.blocks: list[dict[tuple, WeightBlock]] = [self._build_blocks(q) for q in range(n + 1)]
        self._check_square_zero()

    @property
    def top_degree(self) -> int:
        return self.algebra.dim

    def weights_in_degree(self, q: int) -> list[tuple[int, ...]]:
        return sorted({b.weight for b in self.blades_by_degree[q]})

    def _build_blocks(self, q: int) -> dict[tuple, WeightBlock]:
        alg = self.algebra
        src_by_w: dict[tuple, list[Blade]] = {}
        for b in self.blades_by_degree[q]:
            src_by_w.setdefault(b.weight, []).append(b)
        tgt_by_w: dict[tuple, list[Blade]] = {}
        if q + 1 < len(self.blades_by_degree):
            for b in self.blades_by_degree[q + 1]:
                tgt_by_w.setdefault(b.weight, []).append(b)
        blocks = {}
        for w in sorted(src_by_w):
            sources = src_by_w[w]
            targets = tgt_by_w.get(w, [])
            col = {b.indices: c for c, b in enumerate(sources)}
            rows = [[Fraction(0)] * len(sources) for _ in targets]
            for r, t in enumerate(targets):
                T = t.indices
                for i in range(len(T)):
                    for j in range(i + 1, len(T)):
                        sign = -1 if (i + j) % 2 else 1
                        rest = T[:i] + T[i + 1:j] + T[j + 1:]
                        for k, c in alg.bracket(T[i], T[j]):
                            if k in rest:
                                continue
                            pos = sum(1 for x in rest if x < k)
                            S = rest[:pos] + (k,) + rest[pos:]
                            if S not in col:
                                raise ComplexViolation(f"differential leaves the weight block {w}")
                            rows[r][col[S]] += sign * (-1 if pos % 2 else 1) * c
            blocks[w] = WeightBlock(w, sources, targets,
                                    RationalMatrix(rows, ncols=len(sources)))
        return blocks

    def _check_square_zero(self):
        for q in range(len(self.blocks) - 1):
            for w, blk in self.blocks[q].items():
                nxt = self.blocks[q + 1].get(w)
                if nxt is None or not blk.targets:
                    continue
                if not (nxt.matrix @ blk.matrix).is_zero():
                    raise ComplexViolation(f"d^2 != 0 in degree {q}, weight {w}")

    def differential(self, q: int) -> RationalMatrix:
        """Full d_q in blade order (rows: degree q+1 blades, columns: degree q blades)."""
        src = {b.indices: c for c, b in enumerate(self.blades_by_degree[q])}
        tgt_list = self.blades_by_degree[q + 1] if q + 1 < len(self.blades_by_degree) else []
        tgt = {b.indices: r for r, b in enumerate(tgt_list)}
        rows = [[Fraction(0)] * len(src) for _ in tgt_list]
        for blk in self.blocks[q].values():
            for r, t in enumerate(blk.targets):
                for c, s in enumerate(blk.sources):
                    rows[tgt[t.indices]][src[s.indices]] = blk.matrix[r, c]
        return RationalMatrix(rows, ncols=len(src))

    def _incoming(self, q: int, w) -> RationalMatrix:
        n_here = len(self.blocks[q][w].sources)
        if q == 0 or w not in self.blocks[q - 1]:
            return RationalMatrix.zeros(n_here, 0)
        return self.blocks[q - 1][w].matrix

    def block_cohomology(self, q: int, w) -> int:
        blk = self.blocks[q][w]
        d_in = self._incoming(q, w)
        d_out = blk.matrix
        return len(blk.sources) - rank(d_out) - rank(d_in)

    def representative(self, q: int, w) -> tuple[int, ...]:
        """Primitive integer cocycle spanning a one-dimensional cohomology block."""
        blk = self.blocks[q][w]
        image = span_basis(self._incoming(q, w).columns(), len(blk.sources))
        for v in kernel_basis(blk.matrix):
            if solve_in_span(image, v) is None:
                return _primitive(v)
        raise ComplexViolation(f"no cohomology in degree {q}, weight {w}")


def _primitive(v: Sequence[Fraction]) -> tuple[int, ...]:
    den = math.lcm(*(x.denominator for x in v))
    ints = [int(x * den) for x in v]
    g = math.gcd(*ints)
    ints = [x // g for x in ints]
    first = next(x for x in ints if x)
    return tuple(-x for x in ints) if first < 0 else tuple(ints)


def build_ce_complex(source: RootSystem | NilradicalAlgebra) -> CEComplex:
    if isinstance(source, RootSystem):
        if source.rank > MAX_RANK:
            raise BoundcohError(f"rank {source.rank} exceeds {MAX_RANK}")
        source = NilradicalAlgebra.from_root_system(source)
    return CEComplex(source)


@dataclass
class CohomologyDims:
    dims: list[int]
    by_weight: list[list[tuple[tuple[int, ...], int]]]

    @property
    def euler_characteristic(self) -> int:
        return sum((-1) ** q * d for q, d in enumerate(self.dims))


def cohomology_dims(ce: CEComplex) -> CohomologyDims:
    dims, by_weight = [], []
    for q in range(ce.top_degree + 1):
        per = []
        for w in sorted(ce.blocks[q]):
            h = ce.block_cohomology(q, w)
            if h:
                per.append((w, h))
        by_weight.append(per)
        dims.append(sum(h for _, h in per))
    return CohomologyDims(dims, by_weight)


def zero_weight_check(ce: CEComplex) -> dict:
    """Per degree, whether some blade has weight zero.

    On a genuine nilradical the zero weight appears only in degree 0 (the empty
    blade); ``ok`` is False when it shows up in any positive degree.
    """
    zero = tuple([0] * ce.algebra.weight_rank)
    present = [any(b.weight == zero for b in ce.blades_by_degree[q])
               for q in range(ce.top_degree + 1)]
    offending = [q for q in range(1, len(present)) if present[q]]
    return {
        "zero_weight_present": present,
        "offending_degrees": offending,
        "ok": present[0] and not offending,
    }


@dataclass(frozen=True)
class ContractionWitness:
    """Element H of the Cartan subalgebra, stored by its simple-coroot coefficients."""
    rs: RootSystem
    coroot_coeffs: tuple[Fraction, ...]

    def simple_values(self) -> tuple[Fraction, ...]:
        # alpha_i(H) = sum_j c_j <alpha_j^vee, alpha_i>
        a = self.rs.cartan
        n = self.rs.rank
        return tuple(sum((self.coroot_coeffs[j] * a[j][i] for j in range(n)), Fraction(0))
                     for i in range(n))

    def evaluate(self, weight: Sequence[int]) -> Fraction:
        return sum((c * v for c, v in zip(weight, self.simple_values())), Fraction(0))


def contraction_witness(rs: RootSystem) -> ContractionWitness:
    """H in the open positive chamber: the sum of fundamental coweights, alpha_i(H) = 1."""
    a = RationalMatrix(rs.cartan)
    ones = RationalMatrix([[1] for _ in range(rs.rank)])
    coeffs = (a.transpose().inverse() @ ones).column(0)
    return ContractionWitness(rs, coeffs)


def kostant_verify(rs: RootSystem) -> dict:
    """Compare CE cohomology of the nilradical with Weyl-group combinatorics.

    Checks (a) dims[q] equals the number of Weyl elements of length q, (b) every
    nonzero cohomology weight block is one-dimensional, (c) the weights in
    degree q are sigma * (w(rho) - rho) over length-q elements for a single
    global sign sigma, which is determined here rather than assumed.
    """
    ce = build_ce_complex(rs)
    coh = cohomology_dims(ce)
    weyl = rs.enumerate_weyl()
    hist = list(weyl.histogram)
    rho = rs.rho

    predicted: dict[int, set] = {}
    for w in weyl.elements:
        wr = w(rho)
        diff = tuple(x - y for x, y in zip(wr, rho))
        if any(x.denominator != 1 for x in diff):
            raise AssertionError("w(rho) - rho is not integral")
        predicted.setdefault(w.length, set()).add(tuple(int(x) for x in diff))

    observed = {q: {wt for wt, _ in per} for q, per in enumerate(coh.by_weight)}
    degrees = range(max(len(hist), len(coh.dims)))

    def matches(sigma):
        return all(observed.get(q, set()) ==
                   {tuple(sigma * x for x in v) for v in predicted.get(q, set())}
                   for q in degrees)

    sigmas = [s for s in (1, -1) if matches(s)]
    sigma = sigmas[0] if len(sigmas) == 1 else (sigmas[0] if sigmas else None)

    multiplicity_one = all(h == 1 for per in coh.by_weight for _, h in per)
    dims_match = coh.dims == hist
    representatives = {
        str(q): [{"weight": list(wt), "cocycle": list(ce.representative(q, wt))}
                 for wt, h in per if h == 1]
        for q, per in enumerate(coh.by_weight)
    }
    diffs = []
    if not dims_match:
        diffs.append({"dims": coh.dims, "weyl_histogram": hist})
    if sigma is None:
        diffs.append({"observed_weights": {q: sorted(map(list, v)) for q, v in observed.items()}})
    return {
        "type": rs.name,
        "dims": coh.dims,
        "weyl_histogram": hist,
        "weyl_order": weyl.order,
        "total_dim": sum(coh.dims),
        "dims_match": dims_match,
        "multiplicity_one": multiplicity_one,
        "sigma": sigma,
        "sigma_ambiguous": len(sigmas) == 2,
        "weights_match": sigma is not None,
        "weights_by_degree": [[list(wt) for wt, _ in per] for per in coh.by_weight],
        "representatives": representatives,
        "weight_convention": WEIGHT_CONVENTION,
        "pass": dims_match and multiplicity_one and sigma is not None,
        "diffs": diffs,
    }
