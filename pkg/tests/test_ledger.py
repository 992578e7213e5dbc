from math import comb
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from boundcoh.errors import InvalidBetti
from boundcoh.specseq import BettiTable, ledger_solve, theorem_dims
from boundcoh.specseq.ledger import second_page

DATA = Path(__file__).parent / "data"


def tables(max_rank=6):
    return st.integers(1, max_rank).flatmap(
        lambda r: st.lists(st.integers(0, 8), min_size=0, max_size=r + 6).map(
            lambda tail: BettiTable(r, (1, *tail))))


def test_rank_one_example():
    dims = ledger_solve(BettiTable(1, (1, 0, 1))).dims
    assert dims[1] == 0 and dims[2] == 1
    assert all(dims[q] == 0 for q in range(3, 6))


def test_sl2_squared():
    t = BettiTable.load(DATA / "sl2xsl2_betti.json")
    dims = ledger_solve(t).dims
    assert dims[3] == 0 + comb(2, 2) == 1
    assert dims[4] == 1 + comb(2, 2) == 2
    assert all(d == 0 for q, d in dims.items() if q >= 5)


def test_theorem_rank_three_odd_case():
    t = BettiTable(3, (1, 0, 0, 7))
    assert theorem_dims(t)[3] == 7 + 3


@given(tables())
def test_ledger_matches_closed_form(t):
    assert ledger_solve(t).dims == theorem_dims(t)


@given(tables(1))
def test_rank_one_returns_betti(t):
    dims = theorem_dims(t)
    assert all(dims[q] == t.b(q) for q in dims)
    assert ledger_solve(t).dims == dims


@given(tables())
def test_excess_is_betti_free(t):
    # the correction term depends on the rank alone
    base = BettiTable(t.rank, (1,))
    extra = {q: theorem_dims(t)[q] - t.b(q) for q in range(1, t.default_qmax() + 1)}
    assert extra == theorem_dims(base)


@given(tables(), st.integers(1, 12))
def test_qmax_truncates_consistently(t, q_max):
    full = ledger_solve(t, max(q_max, t.default_qmax())).dims
    assert ledger_solve(t, q_max).dims == {q: full[q] for q in range(1, q_max + 1)}


def test_second_page_shape():
    page = second_page(BettiTable(3, (1, 0, 0, 1)), 6)
    assert page[(0, 0)] == page[(1, 0)] == 0
    assert page[(1, 2)] == page[(2, 2)] == 3
    assert page[(1, 3)] == 0
    assert all(page[(p, q)] == 0 for p in range(3, 9) for q in range(1, 7))


def test_e3_bottom_row_only_holds_d2_targets_once():
    res = ledger_solve(BettiTable(2, (1, 0, 2, 0, 1)))
    for n in range(1, 7):
        assert res.e3[(n + 1, 0)] <= res.dims[n]


@pytest.mark.parametrize("betti", [(0,), (2, 0), (1, -1), ()])
def test_invalid_betti(betti):
    with pytest.raises(InvalidBetti):
        BettiTable(2, betti)


def test_invalid_rank():
    with pytest.raises(InvalidBetti):
        BettiTable(0, (1,))


def test_parse_csv():
    assert BettiTable.parse(2, "1,0,2, 0,1").betti == (1, 0, 2, 0, 1)
    with pytest.raises(InvalidBetti):
        BettiTable.parse(2, "1,x")
