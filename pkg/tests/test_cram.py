import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_grundy, cells_of, random_board
from impartial.core import LOSS, WIN, nim_sum_fold
from impartial.cram import (
    CramBoard,
    canonicalize,
    cram_moves,
    parse_board,
    rectangle_shortcut,
    split_components,
    symmetries,
)
from impartial.oracle import Oracle


@st.composite
def boards(draw, max_side=6, max_cells=36):
    rows = draw(st.integers(1, max_side))
    cols = draw(st.integers(1, max(1, min(max_side, max_cells // rows))))
    mask = draw(st.integers(0, (1 << (rows * cols)) - 1))
    return CramBoard(rows, cols, mask)


def test_parse_rectangle():
    b = parse_board("2x2")
    assert (b.rows, b.cols, b.empty_cells()) == (2, 2, 4)


def test_parse_grid():
    b = parse_board("..#\n...")
    assert (b.rows, b.cols) == (2, 3)
    assert not b.cell(0, 2)
    assert b.empty_cells() == 5
    assert parse_board("../..") == parse_board("..\n..")


@pytest.mark.parametrize("spec, line", [
    ("0x3", "line 1"),
    ("..\n...", "line 2"),
    ("..\n.x", "line 2"),
    ("9x9", "line 1"),
    ("", "line 1"),
])
def test_parse_errors(spec, line):
    with pytest.raises(ValueError, match=line):
        parse_board(spec)


def test_grid_text_round_trip():
    b = parse_board("#..\n..#\n.#.")
    assert parse_board(b.to_text()) == b


def test_move_examples():
    assert cram_moves(CramBoard(1, 2)) == [CramBoard(1, 2, 0)]
    assert len(cram_moves(CramBoard(2, 2))) == 4
    assert len(cram_moves(CramBoard(3, 3))) == 12
    assert cram_moves(parse_board(".#.")) == []


@pytest.mark.parametrize("rows, cols", [(r, c) for r in range(1, 8) for c in range(1, 8)])
def test_move_count_on_rectangles(rows, cols):
    b = CramBoard(rows, cols)
    assert len(cram_moves(b)) == rows * (cols - 1) + (rows - 1) * cols
    assert b.move_count() == len(cram_moves(b))


@given(boards())
def test_moves_clear_two_adjacent_cells(b):
    cells = cells_of(b)
    expected = set()
    for r, c in cells:
        for other in ((r, c + 1), (r + 1, c)):
            if other in cells:
                expected.add(cells - {(r, c), other})
    got = [cells_of(q) for q in cram_moves(b)]
    assert len(got) == len(expected)
    assert set(got) == expected
    assert all(len(g) == len(cells) - 2 for g in got)
    assert b.is_terminal() == (not expected)


def test_split_examples():
    comps = split_components(parse_board("..#.."))
    assert len(comps) == 2
    assert all((c.rows, c.cols, c.empty_cells()) == (1, 2, 2) for c in comps)
    assert split_components(parse_board(".#.")) == ()
    (only,) = split_components(CramBoard(3, 3))
    assert (only.rows, only.cols, only.mask) == (3, 3, 0b111111111)


def test_split_drops_isolated_and_crops():
    b = parse_board(".#..\n#...\n.#..")
    (comp,) = split_components(b)
    assert comp.empty_cells() == 7
    assert (comp.rows, comp.cols) == (3, 3)


@given(boards())
def test_split_partitions_usable_cells(b):
    comps = split_components(b)
    total = sum(c.empty_cells() for c in comps)
    usable = {cell for cell in cells_of(b)
              if any(n in cells_of(b) for n in ((cell[0] + 1, cell[1]), (cell[0] - 1, cell[1]),
                                                (cell[0], cell[1] + 1), (cell[0], cell[1] - 1)))}
    assert total == len(usable)
    keys = [c.canonical_key() for c in comps]
    assert keys == sorted(keys)
    for c in comps:
        # idempotent, connected, no isolated cells
        assert split_components(CramBoard(c.rows, c.cols, c.mask)) == (c,)
        assert c.split() == [c]


def test_canonical_key_examples():
    assert CramBoard(2, 3).canonical_key() == CramBoard(3, 2).canonical_key()
    assert parse_board("..#\n...").canonical_key() == parse_board("#..\n...").canonical_key()
    assert CramBoard(2, 3).canonical_key() != CramBoard(1, 6).canonical_key()


@given(boards())
def test_canonical_key_invariant_under_symmetries(b):
    key = canonicalize(b)
    images = symmetries(b)
    assert len(images) == 8
    for img in images:
        assert sorted(map(len, [cells_of(img)])) == [len(cells_of(b))]
        assert canonicalize(img) == key


@given(boards(max_side=4, max_cells=16))
@settings(max_examples=60)
def test_equal_keys_mean_equal_nimbers(b):
    for img in symmetries(b):
        assert brute_grundy(cells_of(img)) == brute_grundy(cells_of(b))


def test_rectangle_shortcut():
    assert rectangle_shortcut(4, 4) is LOSS
    assert rectangle_shortcut(4, 5) is WIN
    assert rectangle_shortcut(5, 4) is WIN
    assert rectangle_shortcut(3, 3) is None


def test_board_cap():
    CramBoard(6, 9)
    CramBoard(8, 8)
    with pytest.raises(ValueError):
        CramBoard(5, 13)


def test_component_nimbers_fold_to_board_nimber():
    rng = random.Random(7)
    oracle = Oracle()
    for _ in range(300):
        b = random_board(rng, max_cells=12)
        whole = oracle.nimber(b)
        assert whole == brute_grundy(cells_of(b))
        assert nim_sum_fold(oracle.nimber(c) for c in split_components(b)) == whole
