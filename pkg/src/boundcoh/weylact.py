"""Weyl group action on exterior powers of the dual Cartan subalgebra.

The dual space uses the fundamental-weight basis (dual to the simple
coroots), where every Weyl element is an integer matrix.  The action on the
q-th exterior power is the q-th compound matrix.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .errors import DegreeOutOfRange
from .ratlin import RationalMatrix, rank
from .rootsys import RootSystem, WeylElement


def _check_degree(rs: RootSystem, q: int):
    if not 0 <= q <= rs.rank:
        raise DegreeOutOfRange(f"degree {q} outside 0..{rs.rank} for {rs.name}")


def weight_basis_matrix(rs: RootSystem, w: WeylElement) -> RationalMatrix:
    """Matrix of w on the fundamental-weight basis: A M A^-1."""
    cache = rs.__dict__.setdefault("_weight_basis_cache", {})
    if w.matrix in cache:
        return cache[w.matrix]
    if "cartan" not in cache:
        a = RationalMatrix(rs.cartan)
        cache["cartan"] = (a, a.inverse())
    a, a_inv = cache["cartan"]
    m = a @ RationalMatrix(w.matrix) @ a_inv
    if any(x.denominator != 1 for row in m.rows for x in row):
        raise AssertionError("Weyl matrix is not integral in the weight basis")
    cache[w.matrix] = m
    return m


def _int_det(rows: list[list[int]]) -> int:
    """Bareiss fraction-free determinant."""
    m = [list(r) for r in rows]
    n = len(m)
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k]), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[-1][-1] if n else 1


def compound(m: RationalMatrix, q: int) -> RationalMatrix:
    """q-th compound: minors indexed by increasing q-subsets, rows by target subset."""
    subsets = list(combinations(range(m.nrows), q))
    if q == 0:
        return RationalMatrix.identity(1)
    if all(x.denominator == 1 for row in m.rows for x in row):
        ints = [[int(x) for x in row] for row in m.rows]
        return RationalMatrix([[_int_det([[ints[i][j] for j in c] for i in r]) for c in subsets]
                               for r in subsets], ncols=len(subsets))
    return RationalMatrix([[m.submatrix(r, c).det() for c in subsets] for r in subsets],
                          ncols=len(subsets))


@dataclass
class ExteriorAction:
    rs: RootSystem
    q: int
    matrices: dict[tuple[int, ...], RationalMatrix]  # keyed by reduced word

    @property
    def dim(self) -> int:
        return next(iter(self.matrices.values())).nrows

    def of(self, w: WeylElement) -> RationalMatrix:
        return self.matrices[w.word]

    def averaging_projector(self) -> RationalMatrix:
        total = RationalMatrix.zeros(self.dim, self.dim)
        for m in self.matrices.values():
            total = total + m
        return total.scale(Fraction(1, len(self.matrices)))

    def spot_check_homomorphism(self) -> bool:
        """rho(s_i) rho(s_j) == rho(s_i s_j) for all simple pairs, identity maps to identity."""
        by_matrix = {w.matrix: w for w in self.rs.weyl}
        ident = tuple(tuple(int(i == j) for j in range(self.rs.rank)) for i in range(self.rs.rank))
        if self.matrices[by_matrix[ident].word] != RationalMatrix.identity(self.dim):
            return False
        refl = self.rs.simple_reflection_matrices
        for i in range(self.rs.rank):
            for j in range(self.rs.rank):
                prod = tuple(tuple(sum(refl[i][r][k] * refl[j][k][c] for k in range(self.rs.rank))
                                   for c in range(self.rs.rank)) for r in range(self.rs.rank))
                lhs = self.matrices[by_matrix[refl[i]].word] @ self.matrices[by_matrix[refl[j]].word]
                if lhs != self.matrices[by_matrix[prod].word]:
                    return False
        return True


def exterior_action(rs: RootSystem, q: int) -> ExteriorAction:
    _check_degree(rs, q)
    cache = rs.__dict__.setdefault("_exterior_cache", {})
    if q not in cache:
        cache[q] = ExteriorAction(rs, q, {w.word: compound(weight_basis_matrix(rs, w), q)
                                          for w in rs.weyl})
    return cache[q]


def invariants_dim(rs: RootSystem, q: int) -> int:
    """Dimension of the W-fixed subspace of the q-th exterior power."""
    p = exterior_action(rs, q).averaging_projector()
    if p @ p != p:
        raise AssertionError("averaging projector is not idempotent")
    return rank(p)


def exterior_characters(rs: RootSystem) -> list[list[int]]:
    """Per Weyl element, traces on the exterior powers 0..r.

    tr(w | q-th power) is the q-th elementary symmetric function of the
    eigenvalues, read off the characteristic polynomial (Faddeev-LeVerrier,
    exact in int64 for these small integer matrices).
    """
    n = rs.rank
    mats = np.array([w.matrix for w in rs.weyl], dtype=np.int64)
    eye = np.broadcast_to(np.eye(n, dtype=np.int64), mats.shape)
    acc = np.zeros_like(mats)
    coeffs = [np.ones(len(mats), dtype=np.int64)]
    for k in range(1, n + 1):
        acc = mats @ acc + coeffs[-1][:, None, None] * eye
        tr = np.trace(mats @ acc, axis1=1, axis2=2)
        if np.any(tr % k):
            raise AssertionError("non-integral characteristic polynomial")
        coeffs.append(-tr // k)
    # det(tI - M) = sum_k c_k t^(n-k), and e_q = (-1)^q c_q
    return [[int((-1) ** q * coeffs[q][i]) for q in range(n + 1)] for i in range(len(mats))]


def invariants_dims_by_character(rs: RootSystem) -> list[int]:
    """dim of W-invariants in every exterior degree, as the average character (cross-check)."""
    chars = exterior_characters(rs)
    order = len(chars)
    out = []
    for q in range(rs.rank + 1):
        total = sum(c[q] for c in chars)
        if total % order:
            raise AssertionError("average character is not an integer")
        out.append(total // order)
    return out


@dataclass
class W0Action:
    q: int
    matrix: RationalMatrix
    scalar: int | None  # +1/-1 when the action is scalar
    fixed_dim: int

    @property
    def outcome(self) -> str:
        """'parity' for the scalar (-1)^q, 'off-parity' for the other scalar, else 'non-scalar'."""
        if self.scalar is None:
            return "non-scalar"
        return "parity" if self.scalar == (-1) ** self.q else "off-parity"

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "scalar": self.scalar,
            "outcome": self.outcome,
            "fixed_dim": self.fixed_dim,
            "matrix": self.matrix.to_strings(),
        }


def w0_exterior_action(rs: RootSystem, q: int) -> W0Action:
    _check_degree(rs, q)
    m = compound(weight_basis_matrix(rs, rs.w0), q)
    n = m.nrows
    scalar = None
    for s in (1, -1):
        if m == RationalMatrix.identity(n).scale(s):
            scalar = s
    fixed = n - rank(m - RationalMatrix.identity(n))
    return W0Action(q, m, scalar, fixed)
