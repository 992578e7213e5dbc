"""First-quadrant bicomplexes over Q and their two spectral sequences.

Cells are indexed ``(p, q)`` with ``0 <= p < width`` and ``0 <= q < height``.
``dh`` maps ``(p, q) -> (p+1, q)`` (the first differential) and ``dv`` maps
``(p, q) -> (p, q+1)`` (the second); the two anticommute.

Pages are computed from explicit leading components of zig-zags.  For the
column filtration (orientation ``"second"``, E_1 = H(dv)):

    Z_r(p,q) = { x_0 in C^{p,q} : exist x_i in C^{p+i,q-i}, i < r, with
                 dv x_0 = 0 and dh x_{i-1} + dv x_i = 0 for 0 < i < r }
    B_r(p,q) = leading (p,q)-components of D y over y supported in
               columns p-r+1..p whose D y vanishes in columns < p

and ``E_r = Z_r / B_r``.  The differential d_r sends the class of x_0 to the
class of ``dh x_{r-1}`` in cell ``(p+r, q-r+1)``.  Orientation ``"first"``
(E_1 = H(dh)) runs the same engine on the transposed bicomplex, so there
d_r has bidegree ``(1-r, r)`` in the original coordinates.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Mapping

from ..errors import BoundcohError, NotABicomplex
from ..ratlin import RationalMatrix, as_rational, kernel_basis, rank, solve_in_span, span_basis

ORIENTATIONS = ("first", "second")


class Bicomplex:
    def __init__(self, dims, dh: Mapping | None = None, dv: Mapping | None = None):
        self.dims = tuple(tuple(int(x) for x in col) for col in dims)
        self.width = len(self.dims)
        self.height = len(self.dims[0]) if self.dims else 0
        if any(len(col) != self.height for col in self.dims):
            raise BoundcohError("dims must be a rectangular width x height grid")
        if any(x < 0 for col in self.dims for x in col):
            raise BoundcohError("negative cell dimension")
        self.dh = self._check_maps(dh or {}, (1, 0), "dh")
        self.dv = self._check_maps(dv or {}, (0, 1), "dv")

    def _check_maps(self, maps, step, name):
        out = {}
        for (p, q), m in maps.items():
            tgt = (p + step[0], q + step[1])
            if not isinstance(m, RationalMatrix):
                m = RationalMatrix(m, ncols=self.dim(p, q))
            if m.shape != (self.dim(*tgt), self.dim(p, q)):
                raise BoundcohError(
                    f"{name} at {(p, q)} has shape {m.shape}, expected {(self.dim(*tgt), self.dim(p, q))}")
            if not m.is_zero():
                out[(p, q)] = m
        return out

    def dim(self, p: int, q: int) -> int:
        if 0 <= p < self.width and 0 <= q < self.height:
            return self.dims[p][q]
        return 0

    def h(self, p: int, q: int) -> RationalMatrix:
        m = self.dh.get((p, q))
        return m if m is not None else RationalMatrix.zeros(self.dim(p + 1, q), self.dim(p, q))

    def v(self, p: int, q: int) -> RationalMatrix:
        m = self.dv.get((p, q))
        return m if m is not None else RationalMatrix.zeros(self.dim(p, q + 1), self.dim(p, q))

    def cells(self):
        return [(p, q) for p in range(self.width) for q in range(self.height)]

    def transpose(self) -> "Bicomplex":
        dims = [[self.dims[p][q] for p in range(self.width)] for q in range(self.height)]
        return Bicomplex(dims,
                         dh={(q, p): m for (p, q), m in self.dv.items()},
                         dv={(q, p): m for (p, q), m in self.dh.items()})

    @property
    def max_total_degree(self) -> int:
        return self.width + self.height - 2

    # -- serialisation -------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "width": self.width,
            "height": self.height,
            "dims": [list(col) for col in self.dims],
            "dh": {f"{p},{q}": m.to_strings() for (p, q), m in sorted(self.dh.items())},
            "dv": {f"{p},{q}": m.to_strings() for (p, q), m in sorted(self.dv.items())},
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Bicomplex":
        try:
            w, h = int(data["width"]), int(data["height"])
            dims = data["dims"]
            if len(dims) != w or any(len(col) != h for col in dims):
                raise BoundcohError("dims grid does not match width/height")

            def parse(maps):
                out = {}
                for key, rows in (maps or {}).items():
                    p, q = (int(t) for t in key.split(","))
                    out[(p, q)] = [[as_rational(str(x)) for x in row] for row in rows]
                return out

            dh, dv = parse(data.get("dh")), parse(data.get("dv"))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            if isinstance(exc, BoundcohError):
                raise
            raise BoundcohError(f"malformed bicomplex file: {exc}") from exc
        b = cls(dims)
        # rows may be empty lists for zero-row maps; pass the column count explicitly
        b.dh = b._check_maps({k: RationalMatrix(v, ncols=b.dim(*k)) for k, v in dh.items()}, (1, 0), "dh")
        b.dv = b._check_maps({k: RationalMatrix(v, ncols=b.dim(*k)) for k, v in dv.items()}, (0, 1), "dv")
        return b

    @classmethod
    def load(cls, path) -> "Bicomplex":
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise BoundcohError(f"{path}: invalid JSON ({exc})") from exc
        return cls.from_json(data)


def validate(b: Bicomplex) -> bool:
    """Check dh.dh = 0, dv.dv = 0 and dh.dv + dv.dh = 0 exactly."""
    for p, q in b.cells():
        if b.dim(p, q) == 0:
            continue
        if not (b.h(p + 1, q) @ b.h(p, q)).is_zero():
            raise NotABicomplex("dh.dh = 0", (p, q))
        if not (b.v(p, q + 1) @ b.v(p, q)).is_zero():
            raise NotABicomplex("dv.dv = 0", (p, q))
        if not (b.h(p, q + 1) @ b.v(p, q) + b.v(p + 1, q) @ b.h(p, q)).is_zero():
            raise NotABicomplex("dh.dv + dv.dh = 0", (p, q))
    return True


# ---------------------------------------------------------------------------
# total complex
# ---------------------------------------------------------------------------

def _tot_cells(b: Bicomplex, n: int):
    return [(p, n - p) for p in range(b.width) if 0 <= n - p < b.height]


def total_differential(b: Bicomplex, n: int) -> RationalMatrix:
    src = _tot_cells(b, n)
    tgt = _tot_cells(b, n + 1)
    s_off, t_off = {}, {}
    acc = 0
    for c in src:
        s_off[c] = acc
        acc += b.dim(*c)
    ncols = acc
    acc = 0
    for c in tgt:
        t_off[c] = acc
        acc += b.dim(*c)
    rows = [[Fraction(0)] * ncols for _ in range(acc)]
    for (p, q) in src:
        for m, t in ((b.h(p, q), (p + 1, q)), (b.v(p, q), (p, q + 1))):
            if t not in t_off:
                continue
            for i in range(m.nrows):
                for j in range(m.ncols):
                    if m[i, j]:
                        rows[t_off[t] + i][s_off[(p, q)] + j] += m[i, j]
    return RationalMatrix(rows, ncols=ncols)


def total_cohomology(b: Bicomplex) -> list[int]:
    """dim H^n of the total complex with differential dh + dv, n = 0..width+height-2."""
    validate(b)
    top = b.max_total_degree
    ranks = [rank(total_differential(b, n)) for n in range(top + 1)]
    out = []
    for n in range(top + 1):
        size = sum(b.dim(*c) for c in _tot_cells(b, n))
        out.append(size - ranks[n] - (ranks[n - 1] if n else 0))
    return out


# ---------------------------------------------------------------------------
# spectral sequence pages
# ---------------------------------------------------------------------------

@dataclass
class PageEntry:
    dim: int
    representatives: list[tuple[Fraction, ...]]  # vectors in the ambient cell


@dataclass
class Page:
    r: int
    orientation: str
    entries: dict[tuple[int, int], PageEntry]
    differentials: dict[tuple[int, int], RationalMatrix] = field(default_factory=dict)

    @property
    def bidegree(self) -> tuple[int, int]:
        return (self.r, 1 - self.r) if self.orientation == "second" else (1 - self.r, self.r)

    def dims(self) -> dict[tuple[int, int], int]:
        return {c: e.dim for c, e in self.entries.items()}

    def dim_grid(self, width: int, height: int) -> list[list[int]]:
        return [[self.entries[(p, q)].dim if (p, q) in self.entries else 0 for q in range(height)]
                for p in range(width)]

    def antidiagonal_sums(self, top: int) -> list[int]:
        sums = [0] * (top + 1)
        for (p, q), e in self.entries.items():
            sums[p + q] += e.dim
        return sums


class _ColumnEngine:
    """Column-filtration spectral sequence of a validated bicomplex."""

    def __init__(self, b: Bicomplex):
        self.b = b
        self._z: dict = {}
        self._bnd: dict = {}

    def _stack(self, blocks, var_cells, eq_cells):
        """Assemble a block matrix: blocks maps (eq_cell, var_cell) -> matrix."""
        b = self.b
        var_off, acc = [], 0
        for c in var_cells:
            var_off.append(acc)
            acc += b.dim(*c)
        ncols = acc
        rows = []
        for ei, ec in enumerate(eq_cells):
            block_rows = [[Fraction(0)] * ncols for _ in range(b.dim(*ec))]
            for vi, vc in enumerate(var_cells):
                m = blocks.get((ei, vi))
                if m is None:
                    continue
                for i in range(m.nrows):
                    for j in range(m.ncols):
                        if m[i, j]:
                            block_rows[i][var_off[vi] + j] += m[i, j]
            rows.extend(block_rows)
        return RationalMatrix(rows, ncols=ncols), var_off

    def zigzags(self, r: int, p: int, q: int):
        """Kernel of the length-r zig-zag system; returns (full kernel vectors, offsets, cells)."""
        key = (r, p, q)
        if key in self._z:
            return self._z[key]
        b = self.b
        var_cells = [(p + i, q - i) for i in range(r)]
        eq_cells = [(p, q + 1)] + [(p + i, q - i + 1) for i in range(1, r)]
        blocks = {(0, 0): b.v(p, q)}
        for i in range(1, r):
            blocks[(i, i - 1)] = b.h(*var_cells[i - 1])
            blocks[(i, i)] = b.v(*var_cells[i])
        m, off = self._stack(blocks, var_cells, eq_cells)
        ker = kernel_basis(m)
        self._z[key] = (ker, off, var_cells)
        return self._z[key]

    def z_basis(self, r: int, p: int, q: int):
        ker, _, _ = self.zigzags(r, p, q)
        d = self.b.dim(p, q)
        return span_basis([v[:d] for v in ker], d)

    def b_basis(self, r: int, p: int, q: int):
        key = (r, p, q)
        if key in self._bnd:
            return self._bnd[key]
        b = self.b
        n = p + q
        cols = list(range(p - r + 1, p + 1))
        var_cells = [(c, n - 1 - c) for c in cols]
        # vanishing of D y in columns p-r+1 .. p-1
        eq_cells = [(c, n - c) for c in cols[:-1]]
        blocks = {}
        for ei, c in enumerate(cols[:-1]):
            blocks[(ei, ei)] = b.v(c, n - 1 - c)
            if ei > 0:
                blocks[(ei, ei - 1)] = b.h(c - 1, n - c)
        m, off = self._stack(blocks, var_cells, eq_cells)
        ker = kernel_basis(m)
        lead = []
        yp, ypm1 = len(cols) - 1, len(cols) - 2
        for v in ker:
            x = b.v(p, q - 1).apply(v[off[yp]:off[yp] + b.dim(p, q - 1)])
            if ypm1 >= 0:
                y = v[off[ypm1]:off[ypm1] + b.dim(p - 1, q)]
                x = tuple(s + t for s, t in zip(x, b.h(p - 1, q).apply(y)))
            lead.append(x)
        basis = span_basis(lead, b.dim(p, q))
        self._bnd[key] = basis
        return basis

    def entry(self, r: int, p: int, q: int) -> tuple[PageEntry, list]:
        """Page entry with representatives chosen as a complement of B_r inside Z_r."""
        bnd = self.b_basis(r, p, q)
        reps = []
        current = list(bnd)
        d = self.b.dim(p, q)
        for z in self.z_basis(r, p, q):
            trial = current + [z]
            if len(span_basis(trial, d)) == len(trial):
                reps.append(z)
                current = trial
        return PageEntry(len(reps), reps), bnd

    def extend(self, r: int, p: int, q: int, x):
        """A zig-zag (x_0 = x, x_1, ..., x_{r-1}) for x in Z_r(p,q)."""
        ker, off, cells = self.zigzags(r, p, q)
        d = self.b.dim(p, q)
        coeffs = solve_in_span([v[:d] for v in ker], x)
        if coeffs is None:
            raise AssertionError(f"representative at {(p, q)} is not in Z_{r}")
        full = [Fraction(0)] * (len(ker[0]) if ker else 0)
        for c, v in zip(coeffs, ker):
            if c:
                full = [a + c * t for a, t in zip(full, v)]
        return [tuple(full[off[i]:off[i] + self.b.dim(*cells[i])]) for i in range(r)], cells

    def page(self, r: int) -> Page:
        b = self.b
        entries, bounds = {}, {}
        for p, q in b.cells():
            if b.dim(p, q):
                e, bnd = self.entry(r, p, q)
                if e.dim:
                    entries[(p, q)] = e
                bounds[(p, q)] = bnd
        diffs = {}
        for (p, q), e in entries.items():
            tgt = (p + r, q - r + 1)
            if tgt not in entries:
                continue
            te = entries[tgt]
            cols = []
            for x in e.representatives:
                chain, cells = self.extend(r, p, q, x)
                last_cell = cells[-1]
                image = b.h(*last_cell).apply(chain[-1])
                coeffs = solve_in_span(te.representatives + bounds[tgt], image)
                if coeffs is None:
                    raise AssertionError(f"d_{r} image from {(p, q)} leaves Z_{r} at {tgt}")
                cols.append(coeffs[:te.dim])
            m = RationalMatrix.from_columns(cols, te.dim)
            if not m.is_zero():
                diffs[(p, q)] = m
        return Page(r, "second", entries, diffs)


def _transpose_page(page: Page) -> Page:
    return Page(page.r, "first",
                {(q, p): e for (p, q), e in page.entries.items()},
                {(q, p): m for (p, q), m in page.differentials.items()})


def stable_page_index(b: Bicomplex, orientation: str) -> int:
    """Smallest r with every d_s, s >= r, forced to vanish by the grid bounds."""
    w, h = (b.width, b.height) if orientation == "second" else (b.height, b.width)
    return max(1, min(w, h + 1))


def compute_pages(b: Bicomplex, orientation: str = "second", r_max: int | None = None) -> list[Page]:
    """Pages E_1 .. E_{r_max}.

    Each page after the first is checked against the cohomology of the
    previous page's differentials.
    """
    if orientation not in ORIENTATIONS:
        raise BoundcohError(f"orientation must be one of {ORIENTATIONS}")
    validate(b)
    if r_max is None:
        r_max = stable_page_index(b, orientation) + 1
    if r_max < 1:
        raise BoundcohError("r_max must be at least 1")
    work = b if orientation == "second" else b.transpose()
    engine = _ColumnEngine(work)
    pages = []
    for r in range(1, r_max + 1):
        page = engine.page(r)
        if pages:
            _check_successor(pages[-1], page)
        pages.append(page)
    if orientation == "first":
        pages = [_transpose_page(pg) for pg in pages]
    return pages


def _check_successor(prev: Page, page: Page):
    r = prev.r
    for (p, q), e in list(prev.entries.items()) + [((c), PageEntry(0, [])) for c in page.entries
                                                  if c not in prev.entries]:
        out = prev.differentials.get((p, q))
        inc = prev.differentials.get((p - r, q + r - 1))
        expected = e.dim - (rank(out) if out is not None else 0) - (rank(inc) if inc is not None else 0)
        got = page.entries[(p, q)].dim if (p, q) in page.entries else 0
        if expected != got:
            raise AssertionError(f"E_{r + 1}{(p, q)} = {got} but H(d_{r}) = {expected}")
    for (p, q), m in prev.differentials.items():
        nxt = prev.differentials.get((p + r, q - r + 1))
        if nxt is not None and not (nxt @ m).is_zero():
            raise AssertionError(f"d_{r} o d_{r} != 0 at {(p, q)}")


def e_infinity(b: Bicomplex, orientation: str = "second") -> Page:
    return compute_pages(b, orientation, stable_page_index(b, orientation))[-1]


# ---------------------------------------------------------------------------
# random bicomplexes
# ---------------------------------------------------------------------------

def _random_unimodular(rng: random.Random, n: int) -> list[list[int]]:
    m = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(3 * n):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            if rng.random() < 0.5:
                m[i] = [-x for x in m[i]]
            continue
        c = rng.choice((-2, -1, 1, 2))
        m[i] = [a + c * b for a, b in zip(m[i], m[j])]
    return m


def _nonzero(rng: random.Random) -> int:
    return rng.choice((-3, -2, -1, 1, 2, 3))


def random_bicomplex(rng: random.Random, width: int = 4, height: int = 4, max_dim: int = 4,
                     attempts: int = 12) -> Bicomplex:
    """Random bicomplex: direct sum of elementary pieces, then a random basis change per cell.

    Pieces are tensor products of one-step cochain complexes (dots, horizontal
    and vertical arrows, anticommuting squares) and zig-zag staircases, which
    carry the nontrivial higher differentials.
    """
    dims = [[0] * height for _ in range(width)]
    edges = []  # (kind, (p, q, i), (p2, q2, j), coef)

    def inside(c):
        return 0 <= c[0] < width and 0 <= c[1] < height

    def try_add(cells, piece_edges):
        if not all(inside(c) for c in cells) or any(dims[p][q] + 1 > max_dim for p, q in cells):
            return
        index = {}
        for c in cells:
            index[c] = dims[c[0]][c[1]]
            dims[c[0]][c[1]] += 1
        for kind, s, t, coef in piece_edges:
            edges.append((kind, (*s, index[s]), (*t, index[t]), coef))

    for _ in range(attempts):
        kind = rng.choice(("dot", "harrow", "varrow", "square", "zigzag", "zigzag"))
        p, q = rng.randrange(width), rng.randrange(height)
        if kind == "dot":
            try_add([(p, q)], [])
        elif kind == "harrow":
            try_add([(p, q), (p + 1, q)], [("h", (p, q), (p + 1, q), _nonzero(rng))])
        elif kind == "varrow":
            try_add([(p, q), (p, q + 1)], [("v", (p, q), (p, q + 1), _nonzero(rng))])
        elif kind == "square":
            a, c = _nonzero(rng), _nonzero(rng)
            sgn = -1 if p % 2 else 1
            try_add([(p, q), (p + 1, q), (p, q + 1), (p + 1, q + 1)], [
                ("h", (p, q), (p + 1, q), a),
                ("h", (p, q + 1), (p + 1, q + 1), a),
                ("v", (p, q), (p, q + 1), sgn * c),
                ("v", (p + 1, q), (p + 1, q + 1), -sgn * c),
            ])
        else:
            n = rng.randrange(width + height - 2)
            # chain position 2k -> (k, n-k), 2k+1 -> (k+1, n-k)
            valid = [i for i in range(2 * (width + height) + 2)
                     if inside((i // 2, n - i // 2) if i % 2 == 0 else (i // 2 + 1, n - i // 2))]
            if len(valid) < 3:
                continue
            i0 = rng.choice(valid)
            length = rng.randint(3, 6)
            chain = [i for i in range(i0, i0 + length) if i in valid]
            chain = chain[:next((k for k in range(1, len(chain)) if chain[k] != chain[k - 1] + 1),
                                len(chain))]
            if len(chain) < 2:
                continue
            cell = [(i // 2, n - i // 2) if i % 2 == 0 else (i // 2 + 1, n - i // 2) for i in chain]
            piece = []
            for k in range(len(chain) - 1):
                if chain[k] % 2 == 0:
                    piece.append(("h", cell[k], cell[k + 1], _nonzero(rng)))
                else:
                    piece.append(("v", cell[k + 1], cell[k], _nonzero(rng)))
            try_add(cell, piece)

    dh_rows = {}
    dv_rows = {}
    for kind, (p, q, i), (p2, q2, j), coef in edges:
        store = dh_rows if kind == "h" else dv_rows
        m = store.setdefault((p, q), [[0] * dims[p][q] for _ in range(dims[p2][q2])])
        m[j][i] += coef

    g = {(p, q): _random_unimodular(rng, dims[p][q]) for p in range(width) for q in range(height)}
    g_inv = {c: RationalMatrix(m).inverse() if m else RationalMatrix.zeros(0, 0) for c, m in g.items()}
    g_mat = {c: RationalMatrix(m, ncols=len(m)) for c, m in g.items()}

    def conj(store, step):
        out = {}
        for (p, q), rows in store.items():
            t = (p + step[0], q + step[1])
            m = RationalMatrix(rows, ncols=dims[p][q])
            out[(p, q)] = g_mat[t] @ m @ g_inv[(p, q)]
        return out

    return Bicomplex(dims, conj(dh_rows, (1, 0)), conj(dv_rows, (0, 1)))
