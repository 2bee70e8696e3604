from hypothesis import given
from hypothesis import strategies as st

from impartial.core import (
    LOSS,
    WIN,
    Couple,
    SumPosition,
    mex,
    nim_sum,
    nim_sum_fold,
    outcome_from_nimber,
    sum_outcome_from_nimbers,
)
from impartial.cram import CramBoard
from impartial.nim import NimPosition

nimbers = st.integers(min_value=0, max_value=2**16)


def test_nim_sum_examples():
    assert nim_sum(9, 12) == 5
    assert nim_sum(7, 7) == 0
    assert nim_sum(0, 13) == 13


def test_nim_sum_fold_examples():
    assert nim_sum_fold([7, 5, 4, 2]) == 4
    assert nim_sum_fold([3, 5, 4, 2]) == 0
    assert nim_sum_fold([]) == 0


def test_mex_examples():
    assert mex({1, 4}) == 0
    assert mex({0, 1, 2, 5}) == 3
    assert mex(set()) == 0
    assert mex([0, 0, 1]) == 2


def test_outcome_from_nimber():
    assert outcome_from_nimber(0) is LOSS
    assert outcome_from_nimber(1) is WIN
    assert outcome_from_nimber(4) is WIN


def test_sum_outcome_from_nimbers():
    assert sum_outcome_from_nimbers(2, 2) is LOSS
    assert sum_outcome_from_nimbers(1, 0) is WIN
    assert sum_outcome_from_nimbers(0, 0) is LOSS


@given(nimbers, nimbers, nimbers)
def test_nim_sum_group_laws(a, b, c):
    assert nim_sum(nim_sum(a, b), c) == nim_sum(a, nim_sum(b, c))
    assert nim_sum(a, b) == nim_sum(b, a)
    assert nim_sum(a, a) == 0
    assert nim_sum(a, 0) == a


@given(nimbers, nimbers)
def test_sum_outcome_matches_nim_sum(a, b):
    assert sum_outcome_from_nimbers(a, b) is outcome_from_nimber(nim_sum(a, b))


@given(st.sets(st.integers(min_value=0, max_value=40), max_size=30))
def test_mex_is_least_missing(values):
    m = mex(values)
    assert m not in values
    assert all(k in values for k in range(m))


def test_couple_options():
    p = NimPosition([2])
    opts = Couple(p, 3).options()
    expected = {(q.canonical_key(), 3) for q in p.options()} | {(p.canonical_key(), i) for i in range(3)}
    assert {(c.position.canonical_key(), c.nimber) for c in opts} == expected
    # nimber-part options come last
    assert [c.nimber for c in opts[-3:]] == [0, 1, 2]
    assert Couple(p, 0).options() == [Couple(q, 0) for q in p.options()]


def test_sum_position_keeps_part_order():
    s = SumPosition([CramBoard(1, 2), CramBoard(1, 3)])
    for opt in s.options():
        a, b = opt.parts
        assert a.rows == 1 and b.rows == 1
        assert (a.cols, b.cols) == (2, 3)
    assert len(s.options()) == 1 + 2


def test_sum_position_split_flattens_and_sorts():
    s = SumPosition([NimPosition([3, 1]), CramBoard(1, 2)])
    comps = s.split()
    assert len(comps) == 3
    assert [c.canonical_key() for c in comps] == sorted(c.canonical_key() for c in comps)


def test_keys_carry_game_tag():
    assert NimPosition([2]).canonical_key()[:1] == b"N"
    assert CramBoard(1, 2).canonical_key()[:1] == b"C"
    assert SumPosition([NimPosition([2])]).canonical_key()[:1] == b"S"
