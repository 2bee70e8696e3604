"""Cram on rectangular boards with holes.

A board is a bit set over ``rows x cols`` cells, bit ``r * cols + c`` set when
cell ``(r, c)`` is empty.  Moves clear two edge-adjacent set bits.  Splitting
drops isolated cells, labels 4-connected regions and crops each one to its
bounding box in canonical orientation, so a component's key is just its own
serialization.

Key layout: tag ``b"C"``, one byte rows, one byte cols, then the bit set
(bit ``r * cols + c`` for cell ``(r, c)``) as a big-endian integer.  The
canonical key is the least such string over the 8 symmetries of the
rectangle.
"""

from __future__ import annotations

import re
from functools import lru_cache

from .core import LOSS, WIN, GamePosition, Outcome

MAX_CELLS = 64
TAG = b"C"

_SPLIT_CACHE: dict[int, tuple["CramBoard", ...]] = {}
_CANON_CACHE: dict[int, tuple[int, int, int, bytes]] = {}
_SPLIT_CACHE_LIMIT = 2_000_000


class _Shape:
    """Per-(rows, cols) masks and symmetry lookup tables."""

    __slots__ = ("rows", "cols", "cells", "full", "not_first_col", "not_last_col",
                 "row_mask", "nbytes", "syms")

    def __init__(self, rows: int, cols: int):
        self.rows = rows
        self.cols = cols
        self.cells = rows * cols
        self.full = (1 << self.cells) - 1
        first = sum(1 << (r * cols) for r in range(rows))
        last = first << (cols - 1)
        self.not_first_col = self.full & ~first
        self.not_last_col = self.full & ~last
        self.row_mask = (1 << cols) - 1
        self.nbytes = (self.cells + 7) // 8
        self.syms = [self._sym_tables(f) for f in _symmetries(rows, cols)]

    def _sym_tables(self, f):
        # f maps (r, c) to (out_rows, out_cols, r', c'); tables map each input
        # byte chunk straight to its contribution in the output mask.
        out_rows, out_cols = f(0, 0)[:2]
        dest = []
        for bit in range(self.cells):
            r, c = divmod(bit, self.cols)
            _, _, r2, c2 = f(r, c)
            dest.append(r2 * out_cols + c2)
        tables = []
        for chunk in range(self.nbytes):
            table = [0] * 256
            for b in range(256):
                v = 0
                for k in range(8):
                    bit = chunk * 8 + k
                    if b >> k & 1 and bit < self.cells:
                        v |= 1 << dest[bit]
                table[b] = v
            tables.append(table)
        return out_rows, out_cols, tables


def _symmetries(h: int, w: int):
    return [
        lambda r, c: (h, w, r, c),
        lambda r, c: (h, w, r, w - 1 - c),
        lambda r, c: (h, w, h - 1 - r, c),
        lambda r, c: (h, w, h - 1 - r, w - 1 - c),
        lambda r, c: (w, h, c, r),
        lambda r, c: (w, h, c, h - 1 - r),
        lambda r, c: (w, h, w - 1 - c, r),
        lambda r, c: (w, h, w - 1 - c, h - 1 - r),
    ]


@lru_cache(maxsize=None)
def _shape(rows: int, cols: int) -> _Shape:
    return _Shape(rows, cols)


def _serialize(rows: int, cols: int, mask: int, nbytes: int) -> bytes:
    return TAG + bytes((rows, cols)) + mask.to_bytes(nbytes, "big")


def _transform(mask: int, tables: list[list[int]]) -> int:
    out = 0
    for table in tables:
        out |= table[mask & 255]
        mask >>= 8
    return out


def _neighbours(mask: int, sh: _Shape) -> int:
    return (((mask << 1) & sh.not_first_col) | ((mask >> 1) & sh.not_last_col)
            | (mask << sh.cols) | (mask >> sh.cols)) & sh.full


def _crop(mask: int, sh: _Shape) -> tuple[int, int, int]:
    """Crop ``mask`` to its bounding box; returns (rows, cols, mask)."""
    cols = sh.cols
    row_mask = sh.row_mask
    r0 = ((mask & -mask).bit_length() - 1) // cols
    r1 = (mask.bit_length() - 1) // cols
    mask >>= r0 * cols
    rows = []
    occupied = 0
    for _ in range(r1 - r0 + 1):
        row = mask & row_mask
        rows.append(row)
        occupied |= row
        mask >>= cols
    c0 = (occupied & -occupied).bit_length() - 1
    width = occupied.bit_length() - c0
    out = 0
    shift = 0
    for row in rows:
        out |= (row >> c0) << shift
        shift += width
    return r1 - r0 + 1, width, out


def _canonical_form(rows: int, cols: int, mask: int) -> tuple[int, int, int, bytes]:
    packed = _packed(rows, cols, mask)
    hit = _CANON_CACHE.get(packed)
    if hit is not None:
        return hit
    sh = _shape(rows, cols)
    # big-endian packing makes byte order agree with (rows, cols, mask) order,
    # and a non-square box is always canonical with its short side as rows
    if rows < cols:
        syms = sh.syms[:4]
    elif rows > cols:
        syms = sh.syms[4:]
    else:
        syms = sh.syms
    out_rows, out_cols = syms[0][:2]
    best = min(_transform(mask, t) for _, _, t in syms)
    result = (out_rows, out_cols, best, _serialize(out_rows, out_cols, best, sh.nbytes))
    if len(_CANON_CACHE) >= _SPLIT_CACHE_LIMIT:
        _CANON_CACHE.clear()
    _CANON_CACHE[packed] = result
    return result


def _packed(rows: int, cols: int, mask: int) -> int:
    return (mask << 16) | (rows << 8) | cols


class CramBoard(GamePosition):
    """Immutable Cram position: ``rows x cols`` with a bit set of empty cells."""

    __slots__ = ("rows", "cols", "mask", "_key", "_canonical")

    def __init__(self, rows: int, cols: int, mask: int | None = None):
        if rows <= 0 or cols <= 0:
            raise ValueError(f"board dimensions must be positive, got {rows}x{cols}")
        if rows * cols > MAX_CELLS:
            raise ValueError(f"{rows}x{cols} board exceeds {MAX_CELLS} cells")
        if rows > 255 or cols > 255:
            raise ValueError("board side exceeds 255")
        full = (1 << (rows * cols)) - 1
        if mask is None:
            mask = full
        elif mask & ~full:
            raise ValueError("mask has bits outside the board")
        self.rows = rows
        self.cols = cols
        self.mask = mask
        self._key: bytes | None = None
        # set when this board is already a cropped, canonical, connected component
        self._canonical = False

    @classmethod
    def full(cls, rows: int, cols: int) -> CramBoard:
        return cls(rows, cols)

    # -- GamePosition -------------------------------------------------------

    def options(self) -> list[GamePosition]:
        sh = _shape(self.rows, self.cols)
        m = self.mask
        rows, cols = self.rows, self.cols
        out: list[GamePosition] = []
        h = m & (m >> 1) & sh.not_last_col
        while h:
            low = h & -h
            h ^= low
            out.append(CramBoard(rows, cols, m ^ (low | low << 1)))
        v = m & (m >> cols)
        while v:
            low = v & -v
            v ^= low
            out.append(CramBoard(rows, cols, m ^ (low | low << cols)))
        return out

    def move_count(self) -> int:
        sh = _shape(self.rows, self.cols)
        m = self.mask
        return bin(m & (m >> 1) & sh.not_last_col).count("1") + bin(m & (m >> self.cols)).count("1")

    def is_terminal(self) -> bool:
        sh = _shape(self.rows, self.cols)
        m = self.mask
        return not (m & (m >> 1) & sh.not_last_col) and not (m & (m >> self.cols))

    def split(self) -> list[GamePosition]:
        if self._canonical:
            return [self]
        return list(split_components(self))

    def is_component(self) -> bool:
        return self._canonical

    def canonical_key(self) -> bytes:
        if self._key is None:
            if self._canonical:
                self._key = _serialize(self.rows, self.cols, self.mask, _shape(self.rows, self.cols).nbytes)
            else:
                self._key = canonicalize(self)
        return self._key

    def size(self) -> int:
        return bin(self.mask).count("1")

    # -- misc ---------------------------------------------------------------

    def empty_cells(self) -> int:
        return self.size()

    def cell(self, r: int, c: int) -> bool:
        return bool(self.mask >> (r * self.cols + c) & 1)

    def to_text(self) -> str:
        return "\n".join(
            "".join("." if self.cell(r, c) else "#" for c in range(self.cols))
            for r in range(self.rows)
        )

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, CramBoard) and self.rows == other.rows
                and self.cols == other.cols and self.mask == other.mask)

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.mask))

    def __repr__(self) -> str:
        return f"CramBoard({self.rows}, {self.cols}, {self.mask:#x})"

    def __str__(self) -> str:
        if self.mask == (1 << (self.rows * self.cols)) - 1:
            return f"{self.rows}x{self.cols}"
        return self.to_text().replace("\n", "/")


def _component(rows: int, cols: int, mask: int) -> CramBoard:
    b = CramBoard(rows, cols, mask)
    b._canonical = True
    return b


def parse_board(spec: str) -> CramBoard:
    """Parse ``"RxC"`` or an ASCII grid of ``.`` (empty) and ``#`` (filled).

    Grid rows are separated by newlines (``/`` is accepted as well, which is
    handy on a command line).
    """
    text = spec.strip()
    m = re.fullmatch(r"(\d+)\s*[xX]\s*(\d+)", text)
    if m:
        rows, cols = int(m.group(1)), int(m.group(2))
        if rows == 0 or cols == 0:
            raise ValueError(f"line 1: zero dimension in {text!r}")
        if rows * cols > MAX_CELLS:
            raise ValueError(f"line 1: {rows}x{cols} exceeds the {MAX_CELLS}-cell cap")
        return CramBoard(rows, cols)
    lines = [ln.strip() for ln in re.split(r"[\n/]", text)]
    if not lines or not lines[0]:
        raise ValueError("line 1: empty board spec")
    width = len(lines[0])
    mask = 0
    for r, line in enumerate(lines):
        if len(line) != width:
            raise ValueError(f"line {r + 1}: expected {width} cells, got {len(line)} ({line!r})")
        bad = set(line) - {".", "#"}
        if bad:
            raise ValueError(f"line {r + 1}: unexpected characters {''.join(sorted(bad))!r} in {line!r}")
        for c, ch in enumerate(line):
            if ch == ".":
                mask |= 1 << (r * width + c)
    if len(lines) * width > MAX_CELLS:
        raise ValueError(f"line {len(lines)}: {len(lines)}x{width} exceeds the {MAX_CELLS}-cell cap")
    return CramBoard(len(lines), width, mask)


def cram_moves(b: CramBoard) -> list[CramBoard]:
    return b.options()  # type: ignore[return-value]


def remove_isolated(b: CramBoard) -> CramBoard:
    sh = _shape(b.rows, b.cols)
    return CramBoard(b.rows, b.cols, b.mask & _neighbours(b.mask, sh))


def split_components(b: CramBoard) -> tuple[CramBoard, ...]:
    """Connected regions of ``b``, isolated cells dropped, sorted by key."""
    if b._canonical:
        return (b,)
    packed = _packed(b.rows, b.cols, b.mask)
    hit = _SPLIT_CACHE.get(packed)
    if hit is not None:
        return hit
    sh = _shape(b.rows, b.cols)
    m = b.mask & _neighbours(b.mask, sh)
    comps = []
    while m:
        region = m & -m
        while True:
            grown = (region | _neighbours(region, sh)) & m
            if grown == region:
                break
            region = grown
        m ^= region
        r, c, cm = _crop(region, sh)
        rows, cols, cmask, key = _canonical_form(r, c, cm)
        comp = _component(rows, cols, cmask)
        comp._key = key
        comps.append(comp)
    if len(comps) > 1:
        comps.sort(key=lambda x: x._key)
    result = tuple(comps)
    if len(_SPLIT_CACHE) >= _SPLIT_CACHE_LIMIT:
        _SPLIT_CACHE.clear()
    _SPLIT_CACHE[packed] = result
    return result


def canonicalize(b: CramBoard) -> bytes:
    """Canonical key of the whole board (not split into components).

    Isolated cells are dropped and the rest cropped to its bounding box first;
    neither changes the game.
    """
    sh = _shape(b.rows, b.cols)
    m = b.mask & _neighbours(b.mask, sh)
    if not m:
        return TAG + b"\x00\x00"
    r, c, cm = _crop(m, sh)
    return _canonical_form(r, c, cm)[3]


def symmetries(b: CramBoard) -> list[CramBoard]:
    """The 8 images of ``b`` under the rectangle's symmetry group."""
    sh = _shape(b.rows, b.cols)
    return [CramBoard(r, c, _transform(b.mask, t)) for r, c, t in sh.syms]


def rectangle_shortcut(rows: int, cols: int) -> Outcome | None:
    """Outcome of a full empty rectangle from the mirror strategy, if it applies."""
    if rows % 2 == 0 and cols % 2 == 0:
        return LOSS
    if rows % 2 == 0 or cols % 2 == 0:
        return WIN
    return None


def clear_caches() -> None:
    _SPLIT_CACHE.clear()
    _CANON_CACHE.clear()
