"""Exact linear algebra over the rationals.

Entries are :class:`fractions.Fraction`, which keeps every value in lowest
terms with a positive denominator after each operation.  Matrices are small
and dense, so plain Gauss-Jordan elimination is used throughout.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ComplexViolation

Rational = Fraction

__all__ = [
    "Rational",
    "RationalMatrix",
    "as_rational",
    "rref",
    "rank",
    "kernel_basis",
    "cohomology_dim",
    "span_basis",
    "solve_in_span",
]


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are rejected: an exact toolkit should never silently ingest one.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rational entries")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError(f"refusing float entry {x!r}; pass an int, Fraction or 'p/q' string")
    return Fraction(x)


class RationalMatrix:
    """Immutable dense matrix of Fractions.

    A matrix may have zero rows or zero columns; the shape is always tracked
    explicitly so that maps to or from the zero space compose correctly.
    """

    __slots__ = ("_rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable] = (), ncols: int | None = None):
        data = tuple(tuple(as_rational(x) for x in row) for row in rows)
        if data:
            widths = {len(r) for r in data}
            if len(widths) != 1:
                raise ValueError("ragged rows")
            w = widths.pop()
            if ncols is not None and ncols != w:
                raise ValueError(f"declared {ncols} columns, rows have {w}")
            ncols = w
        elif ncols is None:
            ncols = 0
        self._rows = data
        self.nrows = len(data)
        self.ncols = ncols

    # constructors -------------------------------------------------------
    @classmethod
    def _raw(cls, rows: tuple, nrows: int, ncols: int) -> "RationalMatrix":
        m = cls.__new__(cls)
        m._rows = rows
        m.nrows = nrows
        m.ncols = ncols
        return m

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "RationalMatrix":
        z = Fraction(0)
        return cls._raw(tuple((z,) * ncols for _ in range(nrows)), nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        one, z = Fraction(1), Fraction(0)
        return cls._raw(tuple(tuple(one if i == j else z for j in range(n)) for i in range(n)), n, n)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], nrows: int) -> "RationalMatrix":
        cols = [tuple(as_rational(x) for x in c) for c in cols]
        for c in cols:
            if len(c) != nrows:
                raise ValueError("column length mismatch")
        return cls._raw(tuple(tuple(c[i] for c in cols) for i in range(nrows)), nrows, len(cols))

    @classmethod
    def block_diag(cls, blocks: Sequence["RationalMatrix"]) -> "RationalMatrix":
        nr = sum(b.nrows for b in blocks)
        nc = sum(b.ncols for b in blocks)
        out = [[Fraction(0)] * nc for _ in range(nr)]
        r0 = c0 = 0
        for b in blocks:
            for i, row in enumerate(b._rows):
                out[r0 + i][c0:c0 + b.ncols] = row
            r0 += b.nrows
            c0 += b.ncols
        return cls._raw(tuple(tuple(r) for r in out), nr, nc)

    # basic protocol -----------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def rows(self) -> tuple[tuple[Fraction, ...], ...]:
        return self._rows

    def __getitem__(self, idx):
        i, j = idx
        return self._rows[i][j]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self._rows)

    def columns(self) -> list[tuple[Fraction, ...]]:
        return [self.column(j) for j in range(self.ncols)]

    def to_lists(self) -> list[list[Fraction]]:
        return [list(r) for r in self._rows]

    def to_strings(self) -> list[list[str]]:
        return [[str(x) for x in r] for r in self._rows]

    def __eq__(self, other):
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self):
        return hash((self.shape, self._rows))

    def __repr__(self):
        body = ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self._rows)
        return f"RationalMatrix({self.nrows}x{self.ncols}: [{body}])"

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._rows for x in r)

    # arithmetic ---------------------------------------------------------
    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = other.columns()
        z = Fraction(0)
        rows = []
        for r in self._rows:
            nz = [(k, x) for k, x in enumerate(r) if x]
            rows.append(tuple(sum((x * c[k] for k, x in nz), z) for c in cols))
        return RationalMatrix._raw(tuple(rows), self.nrows, other.ncols)

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        return RationalMatrix._raw(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._rows, other._rows)),
            self.nrows, self.ncols)

    def __neg__(self) -> "RationalMatrix":
        return self.scale(-1)

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        return self + (-other)

    def scale(self, c) -> "RationalMatrix":
        c = as_rational(c)
        return RationalMatrix._raw(tuple(tuple(c * x for x in r) for r in self._rows),
                                   self.nrows, self.ncols)

    def apply(self, v: Sequence) -> tuple[Fraction, ...]:
        if len(v) != self.ncols:
            raise ValueError("vector length mismatch")
        z = Fraction(0)
        return tuple(sum((x * y for x, y in zip(r, v) if x and y), z) for r in self._rows)

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix._raw(tuple(zip(*self._rows)) if self.nrows else
                                   tuple(() for _ in range(self.ncols)),
                                   self.ncols, self.nrows)

    T = property(transpose)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "RationalMatrix":
        return RationalMatrix._raw(tuple(tuple(self._rows[i][j] for j in cols) for i in rows),
                                   len(rows), len(cols))

    def hstack(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch")
        return RationalMatrix._raw(tuple(a + b for a, b in zip(self._rows, other._rows)),
                                   self.nrows, self.ncols + other.ncols)

    def vstack(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.ncols != other.ncols:
            raise ValueError("column count mismatch")
        return RationalMatrix._raw(self._rows + other._rows, self.nrows + other.nrows, self.ncols)

    def det(self) -> Fraction:
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        m = self.to_lists()
        n = self.nrows
        d = Fraction(1)
        for c in range(n):
            piv = next((i for i in range(c, n) if m[i][c]), None)
            if piv is None:
                return Fraction(0)
            if piv != c:
                m[c], m[piv] = m[piv], m[c]
                d = -d
            p = m[c][c]
            d *= p
            for i in range(c + 1, n):
                f = m[i][c]
                if f:
                    f /= p
                    m[i] = [a - f * b for a, b in zip(m[i], m[c])]
        return d

    def inverse(self) -> "RationalMatrix":
        n = self.nrows
        if n != self.ncols:
            raise ValueError("inverse of a non-square matrix")
        red, piv, r = rref(self.hstack(RationalMatrix.identity(n)))
        if piv[:n] != list(range(n)):
            raise ZeroDivisionError("singular matrix")
        return red.submatrix(range(n), range(n, 2 * n))


def _rref_lists(m: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    pivots: list[int] = []
    r = 0
    nrows = len(m)
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        if p != 1:
            m[r] = [x / p for x in m[r]]
        prow = m[r]
        for i in range(nrows):
            if i != r:
                f = m[i][c]
                if f:
                    m[i] = [a - f * b for a, b in zip(m[i], prow)]
        pivots.append(c)
        r += 1
    return m, pivots


def rref(m: RationalMatrix) -> tuple[RationalMatrix, list[int], int]:
    """Reduced row echelon form, pivot columns and rank."""
    rows, piv = _rref_lists(m.to_lists(), m.ncols)
    return RationalMatrix._raw(tuple(tuple(r) for r in rows), m.nrows, m.ncols), piv, len(piv)


def rank(m: RationalMatrix) -> int:
    if m.nrows == 0 or m.ncols == 0:
        return 0
    # eliminate along the shorter side
    if m.nrows > m.ncols:
        m = m.transpose()
    return len(_rref_lists(m.to_lists(), m.ncols)[1])


def kernel_basis(m: RationalMatrix) -> list[tuple[Fraction, ...]]:
    """Basis of the right null space, one vector per free column."""
    red, piv, _ = rref(m)
    n = m.ncols
    pivset = set(piv)
    basis = []
    for f in range(n):
        if f in pivset:
            continue
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, pc in enumerate(piv):
            v[pc] = -red[i, f]
        basis.append(tuple(v))
    return basis


def span_basis(vectors: Sequence[Sequence], dim: int) -> list[tuple[Fraction, ...]]:
    """Echelon basis of the span of ``vectors`` inside Q^dim."""
    if not vectors:
        return []
    red, _, r = rref(RationalMatrix(vectors, ncols=dim))
    return [red.rows[i] for i in range(r)]


def solve_in_span(basis: Sequence[Sequence], v: Sequence) -> tuple[Fraction, ...] | None:
    """Coefficients c with sum c_i basis[i] == v, or None when v is outside the span.

    ``basis`` must be linearly independent.
    """
    dim = len(v)
    if not basis:
        return () if all(x == 0 for x in v) else None
    a = RationalMatrix.from_columns(basis, dim).hstack(RationalMatrix.from_columns([v], dim))
    red, piv, _ = rref(a)
    k = len(basis)
    if k in piv:
        return None
    coeffs = [Fraction(0)] * k
    for i, pc in enumerate(piv):
        coeffs[pc] = red[i, k]
    return tuple(coeffs)


def cohomology_dim(d_in: RationalMatrix, d_out: RationalMatrix) -> int:
    """dim ker(d_out) - rank(d_in) for a two-step complex  V -d_in-> W -d_out-> U."""
    if d_in.nrows != d_out.ncols:
        raise ComplexViolation(
            f"incomposable maps: d_in lands in Q^{d_in.nrows}, d_out starts at Q^{d_out.ncols}")
    if d_in.ncols and d_out.nrows and not (d_out @ d_in).is_zero():
        raise ComplexViolation("d_out . d_in != 0")
    return d_out.ncols - rank(d_out) - rank(d_in)
