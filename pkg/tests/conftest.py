import random
from functools import lru_cache

import pytest

from impartial.cram import CramBoard

ACCEPTANCE_LINES: list[str] = []


def cells_of(board: CramBoard) -> frozenset:
    return frozenset((r, c) for r in range(board.rows) for c in range(board.cols) if board.cell(r, c))


@lru_cache(maxsize=None)
def brute_grundy(cells: frozenset) -> int:
    """Grundy value of a set of empty cells, by direct enumeration."""
    seen = set()
    for r, c in cells:
        for other in ((r, c + 1), (r + 1, c)):
            if other in cells:
                seen.add(brute_grundy(cells - {(r, c), other}))
    n = 0
    while n in seen:
        n += 1
    return n


def random_board(rng: random.Random, max_cells: int = 12, max_side: int = 5) -> CramBoard:
    rows = rng.randint(1, max_side)
    cols = rng.randint(1, max_side)
    cells = [(r, c) for r in range(rows) for c in range(cols)]
    rng.shuffle(cells)
    keep = cells[: rng.randint(0, min(max_cells, len(cells)))]
    mask = 0
    for r, c in keep:
        mask |= 1 << (r * cols + c)
    return CramBoard(rows, cols, mask)


def random_polyomino(rng: random.Random, cells: int, side: int = 5) -> CramBoard:
    """Grow a random 4-connected shape of ``cells`` cells inside ``side x side``."""
    if cells == 0:
        return CramBoard(1, 1, 0)
    shape = {(rng.randrange(side), rng.randrange(side))}
    while len(shape) < cells:
        r, c = rng.choice(sorted(shape))
        dr, dc = rng.choice(((0, 1), (1, 0), (0, -1), (-1, 0)))
        if 0 <= r + dr < side and 0 <= c + dc < side:
            shape.add((r + dr, c + dc))
    mask = 0
    for r, c in shape:
        mask |= 1 << (r * side + c)
    return CramBoard(side, side, mask)


@pytest.fixture
def rng():
    return random.Random(20240611)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
