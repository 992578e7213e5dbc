import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from boundcoh.errors import ComplexViolation
from boundcoh.ratlin import (RationalMatrix, as_rational, cohomology_dim, kernel_basis, rank, rref,
                             solve_in_span, span_basis)

small = st.integers(-4, 4)


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)))


def test_rref_identity():
    m, piv, r = rref(RationalMatrix.identity(3))
    assert m == RationalMatrix.identity(3)
    assert piv == [0, 1, 2] and r == 3


def test_rref_zero():
    m, piv, r = rref(RationalMatrix.zeros(2, 2))
    assert m.is_zero() and piv == [] and r == 0


def test_rref_proportional_rows():
    m, piv, r = rref(RationalMatrix([[1, 2], [2, 4]]))
    assert m == RationalMatrix([[1, 2], [0, 0]])
    assert r == 1


def test_kernel_examples():
    assert kernel_basis(RationalMatrix.identity(3)) == []
    assert len(kernel_basis(RationalMatrix.zeros(2, 3))) == 3
    (v,) = kernel_basis(RationalMatrix([[1, 1]]))
    assert v[0] == -v[1] != 0


def test_as_rational_rejects_floats():
    assert as_rational("3/4") == Fraction(3, 4)
    with pytest.raises(TypeError):
        as_rational(0.5)


@given(matrices())
def test_rref_idempotent(rows):
    m = RationalMatrix(rows)
    once, piv, r = rref(m)
    twice, piv2, r2 = rref(once)
    assert once == twice and piv == piv2 and r == r2


@given(matrices())
def test_rank_nullity(rows):
    m = RationalMatrix(rows)
    ker = kernel_basis(m)
    assert rank(m) + len(ker) == m.ncols
    for v in ker:
        assert all(x == 0 for x in m.apply(v))


@given(matrices(4, 4))
def test_rank_matches_sympy(rows):
    assert rank(RationalMatrix(rows)) == sympy.Matrix(rows).rank()


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=1, max_size=4))
def test_span_and_solve(vectors):
    basis = span_basis(vectors, 3)
    assert len(basis) == sympy.Matrix(vectors).rank()
    for v in vectors:
        assert solve_in_span(basis, v) is not None


def test_solve_outside_span():
    assert solve_in_span([(1, 0, 0)], (0, 1, 0)) is None


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=3, max_size=3))
def test_inverse_roundtrip(rows):
    m = RationalMatrix(rows)
    if m.det() == 0:
        with pytest.raises(ZeroDivisionError):
            m.inverse()
    else:
        assert m @ m.inverse() == RationalMatrix.identity(3)
        assert m.det() == sympy.Matrix(rows).det()


def test_cohomology_trivial_cases():
    assert cohomology_dim(RationalMatrix.zeros(4, 2), RationalMatrix.zeros(1, 4)) == 4
    d_in = RationalMatrix([[1], [0]])
    d_out = RationalMatrix([[0, 1]])
    assert cohomology_dim(d_in, d_out) == 0


def test_cohomology_rejects_non_complex():
    with pytest.raises(ComplexViolation):
        cohomology_dim(RationalMatrix([[1]]), RationalMatrix([[1]]))
    with pytest.raises(ComplexViolation):
        cohomology_dim(RationalMatrix([[1, 0]]), RationalMatrix([[1, 0]]))


def _random_complex(rng):
    """4 -> 6 -> 3 with d_out d_in = 0 by construction: d_in lands in ker d_out."""
    d_out = [[rng.randint(-3, 3) for _ in range(6)] for _ in range(3)]
    ker = sympy.Matrix(d_out).nullspace()
    cols = []
    for _ in range(4):
        v = sum((rng.randint(-2, 2) * k for k in ker), sympy.zeros(6, 1))
        cols.append(list(v))
    d_in = [[cols[j][i] for j in range(4)] for i in range(6)]
    return d_in, d_out


@settings(max_examples=50)
@given(st.integers(0, 10**6))
def test_cohomology_against_sympy_oracle(seed):
    d_in, d_out = _random_complex(random.Random(seed))
    got = cohomology_dim(RationalMatrix([[Fraction(str(x)) for x in r] for r in d_in]),
                         RationalMatrix(d_out))
    expected = 6 - sympy.Matrix(d_out).rank() - sympy.Matrix(d_in).rank()
    assert got == expected
