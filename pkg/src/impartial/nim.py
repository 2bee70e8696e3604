"""Nim: playable positions plus Bouton's closed form as a reference."""

from __future__ import annotations

from .core import GamePosition, Nimber, Outcome, nim_sum_fold, outcome_from_nimber


class NimPosition(GamePosition):
    """A multiset of heaps, stored sorted descending with empty heaps dropped."""

    __slots__ = ("heaps", "_key")

    TAG = b"N"

    def __init__(self, heaps=()):
        hs = []
        for h in heaps:
            h = int(h)
            if h < 0:
                raise ValueError(f"negative heap size {h}")
            if h:
                hs.append(h)
        self.heaps: tuple[int, ...] = tuple(sorted(hs, reverse=True))
        self._key: bytes | None = None

    def options(self) -> list[GamePosition]:
        seen = set()
        out: list[GamePosition] = []
        for idx, h in enumerate(self.heaps):
            if idx and h == self.heaps[idx - 1]:
                continue  # same move as in the previous, equal heap
            rest = self.heaps[:idx] + self.heaps[idx + 1:]
            for left in range(h - 1, -1, -1):
                opt = NimPosition(rest + (left,))
                if opt.heaps not in seen:
                    seen.add(opt.heaps)
                    out.append(opt)
        return out

    def split(self) -> list[GamePosition]:
        if len(self.heaps) <= 1:
            return [self]
        parts = [NimPosition((h,)) for h in self.heaps]
        parts.sort(key=lambda p: p.canonical_key())
        return parts

    def is_component(self) -> bool:
        return len(self.heaps) <= 1

    def canonical_key(self) -> bytes:
        if self._key is None:
            self._key = self.TAG + ",".join(map(str, self.heaps)).encode()
        return self._key

    def size(self) -> int:
        return sum(self.heaps)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, NimPosition) and self.heaps == other.heaps

    def __hash__(self) -> int:
        return hash(self.heaps)

    def __repr__(self) -> str:
        return f"NimPosition({list(self.heaps)})"

    def __str__(self) -> str:
        return ",".join(map(str, self.heaps)) or "{}"


def parse_heaps(text: str) -> NimPosition:
    """Parse ``"7,5,4,2"``; an empty string is the empty position."""
    text = text.strip()
    if not text:
        return NimPosition()
    try:
        sizes = [int(tok) for tok in text.split(",")]
    except ValueError:
        raise ValueError(f"bad heap list {text!r}: expected comma-separated integers") from None
    if any(s < 0 for s in sizes):
        raise ValueError(f"bad heap list {text!r}: heap sizes must be non-negative")
    return NimPosition(sizes)


def nim_options(p: NimPosition) -> list[NimPosition]:
    return p.options()  # type: ignore[return-value]


def bouton_nimber(p: NimPosition) -> Nimber:
    return nim_sum_fold(p.heaps)


def bouton_outcome(p: NimPosition) -> Outcome:
    return outcome_from_nimber(bouton_nimber(p))
