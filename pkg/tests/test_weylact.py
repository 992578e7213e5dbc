import os
from itertools import combinations

import pytest
import sympy

from boundcoh.errors import DegreeOutOfRange
from boundcoh.ratlin import RationalMatrix
from boundcoh.rootsys import build_root_system
from boundcoh.suite import irreducible_types
from boundcoh.weylact import (compound, exterior_action, exterior_characters, invariants_dim,
                              invariants_dims_by_character, w0_exterior_action, weight_basis_matrix)

RANK_LE_4 = irreducible_types(4)


@pytest.mark.parametrize("t", ["A1", "A2", "B2", "G2", "A1xA1", "F4"])
def test_degree_zero_is_trivial(t):
    assert invariants_dim(build_root_system(t), 0) == 1


def test_a2_examples():
    rs = build_root_system("A2")
    assert invariants_dim(rs, 1) == 0
    assert invariants_dim(rs, 2) == 0


@pytest.mark.parametrize("t", RANK_LE_4)
def test_steinberg_rank_le_4(t):
    rs = build_root_system(t)
    assert [invariants_dim(rs, q) for q in range(1, rs.rank + 1)] == [0] * rs.rank


SLOW = not os.environ.get("BOUNDCOH_SLOW")
RANK_5_6 = [t for t in irreducible_types(6) if t not in RANK_LE_4]
FAST_RANK_5_6 = ["A5", "B5", "C5", "D5", "A6"]


@pytest.mark.parametrize("t", [t for t in RANK_5_6 if t in FAST_RANK_5_6] +
                         [pytest.param(t, marks=pytest.mark.skipif(SLOW, reason="set BOUNDCOH_SLOW=1"))
                          for t in RANK_5_6 if t not in FAST_RANK_5_6])
def test_steinberg_rank_5_6_by_character(t):
    rs = build_root_system(t)
    assert invariants_dims_by_character(rs) == [1] + [0] * rs.rank


@pytest.mark.skipif(SLOW, reason="set BOUNDCOH_SLOW=1 for the projector route at rank 5-6")
@pytest.mark.parametrize("t", RANK_5_6)
def test_steinberg_rank_5_6_by_projector(t):
    rs = build_root_system(t)
    assert [invariants_dim(rs, q) for q in range(1, rs.rank + 1)] == [0] * rs.rank


@pytest.mark.parametrize("t", ["A2", "B3", "G2", "A1xA1", "C3"])
def test_characters_match_compound_traces(t):
    rs = build_root_system(t)
    chars = exterior_characters(rs)
    for w, c in zip(rs.weyl, chars):
        for q in range(rs.rank + 1):
            m = exterior_action(rs, q).of(w)
            assert sum(m[i, i] for i in range(m.nrows)) == c[q]


@pytest.mark.parametrize("t", RANK_LE_4 + ["A1xA1"])
def test_character_route_agrees_with_projector(t):
    rs = build_root_system(t)
    assert invariants_dims_by_character(rs) == [invariants_dim(rs, q) for q in range(rs.rank + 1)]


def test_reducible_type_invariants():
    # each A1 factor flips its own coordinate, so e1 ^ e2 is negated by both generators
    assert invariants_dim(build_root_system("A1xA1"), 2) == 0
    assert invariants_dim(build_root_system("A1xA1"), 1) == 0


@pytest.mark.parametrize("t,q", [("A3", 2), ("B3", 1), ("G2", 2)])
def test_projector_idempotent(t, q):
    p = exterior_action(build_root_system(t), q).averaging_projector()
    assert p @ p == p


@pytest.mark.parametrize("t", ["A2", "B2", "G2", "A3", "C3"])
def test_exterior_action_is_homomorphism(t):
    rs = build_root_system(t)
    for q in range(rs.rank + 1):
        assert exterior_action(rs, q).spot_check_homomorphism()


@pytest.mark.parametrize("t", ["A2", "B3", "G2"])
def test_weight_basis_matrices_integral(t):
    rs = build_root_system(t)
    for w in rs.weyl:
        m = weight_basis_matrix(rs, w)
        assert all(x.denominator == 1 for row in m.rows for x in row)


def test_compound_against_sympy_minors():
    rows = [[2, -1, 0, 3], [1, 1, 4, 0], [0, 2, -3, 1], [5, 0, 1, 1]]
    m = RationalMatrix(rows)
    s = sympy.Matrix(rows)
    for q in range(5):
        c = compound(m, q)
        subsets = list(combinations(range(4), q))
        for i, r in enumerate(subsets):
            for j, cs in enumerate(subsets):
                expected = s.extract(list(r), list(cs)).det() if q else 1
                assert c[i, j] == expected


def test_compound_multiplicative():
    a = RationalMatrix([[1, 2, 0], [0, 1, -1], [3, 0, 1]])
    b = RationalMatrix([[0, 1, 1], [2, 0, 1], [1, 1, 0]])
    for q in range(4):
        assert compound(a @ b, q) == compound(a, q) @ compound(b, q)


def test_w0_examples():
    assert w0_exterior_action(build_root_system("A1"), 1).scalar == -1
    assert w0_exterior_action(build_root_system("B2"), 1).scalar == -1
    a2 = w0_exterior_action(build_root_system("A2"), 1)
    assert a2.scalar is None and a2.outcome == "non-scalar"


@pytest.mark.parametrize("t", ["A1", "B2", "C3", "G2", "B3", "D4", "F4", "A1xA1"])
def test_w0_parity_follows_from_degree_one(t):
    rs = build_root_system(t)
    assert w0_exterior_action(rs, 1).scalar == -1
    for q in range(rs.rank + 1):
        act = w0_exterior_action(rs, q)
        assert act.scalar == (-1) ** q and act.outcome == "parity"


def test_a2_top_degree_is_off_parity():
    # w0 has determinant (-1)^3 = -1 while q = 2 is even
    act = w0_exterior_action(build_root_system("A2"), 2)
    assert act.scalar == -1 and act.outcome == "off-parity"


@pytest.mark.parametrize("q", [-1, 3])
def test_degree_out_of_range(q):
    rs = build_root_system("A2")
    with pytest.raises(DegreeOutOfRange):
        invariants_dim(rs, q)
    with pytest.raises(DegreeOutOfRange):
        w0_exterior_action(rs, q)
