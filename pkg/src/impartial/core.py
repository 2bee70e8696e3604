"""Nimber arithmetic, outcomes, couples and the position interface.

Every game plugged into the solver implements :class:`GamePosition`.  Positions
are immutable; the solver only ever asks for options, the split into
independent components, a canonical key and a size measure.
"""

from __future__ import annotations

import enum
from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import reduce
from operator import xor
from typing import Iterable, Sequence

Nimber = int


class Outcome(enum.Enum):
    WIN = "W"
    LOSS = "L"

    def __str__(self) -> str:
        return self.value


WIN = Outcome.WIN
LOSS = Outcome.LOSS


def nim_sum(a: Nimber, b: Nimber) -> Nimber:
    return a ^ b


def nim_sum_fold(values: Iterable[Nimber]) -> Nimber:
    return reduce(xor, values, 0)


def mex(values: Iterable[Nimber]) -> Nimber:
    """Least non-negative integer missing from ``values``."""
    seen = set(values)
    n = 0
    while n in seen:
        n += 1
    return n


def outcome_from_nimber(n: Nimber) -> Outcome:
    return LOSS if n == 0 else WIN


def sum_outcome_from_nimbers(n1: Nimber, n2: Nimber) -> Outcome:
    return LOSS if n1 == n2 else WIN


class GamePosition(ABC):
    """A position of a normal-play impartial game.

    ``canonical_key`` must start with a per-game tag byte so keys from different
    games never collide in a shared store, and two positions with the same key
    must have the same nimber.
    """

    __slots__ = ()

    @abstractmethod
    def options(self) -> list[GamePosition]:
        ...

    @abstractmethod
    def split(self) -> list[GamePosition]:
        """Independent components in a deterministic order.

        Returns ``[self]`` when the position does not decompose.  May return an
        empty list when nothing playable is left.
        """

    @abstractmethod
    def canonical_key(self) -> bytes:
        ...

    @abstractmethod
    def size(self) -> int:
        """Game-specific size measure used for ordering (cells, matches)."""

    def is_terminal(self) -> bool:
        return not self.options()

    def is_component(self) -> bool:
        """True when ``split()`` would return exactly ``[self]``."""
        parts = self.split()
        return len(parts) == 1 and parts[0] is self


@dataclass(frozen=True, slots=True)
class Couple:
    """The sum ``position + *nimber``."""

    position: GamePosition
    nimber: Nimber = 0

    def options(self) -> list[Couple]:
        opts = [Couple(p, self.nimber) for p in self.position.options()]
        opts.extend(Couple(self.position, i) for i in range(self.nimber))
        return opts

    def __str__(self) -> str:
        return f"({self.position}, *{self.nimber})"


class SumPosition(GamePosition):
    """An ordered sum of positions, possibly from different games.

    The parts keep their order through moves, so a move in part ``i`` of
    ``A + B`` yields a sum whose part ``i`` is the moved part.  This is what
    lets a solution tree over a sum be read component by component.
    """

    __slots__ = ("parts", "_key")

    TAG = b"S"

    def __init__(self, parts: Sequence[GamePosition]):
        self.parts = tuple(parts)
        self._key: bytes | None = None

    def options(self) -> list[GamePosition]:
        out: list[GamePosition] = []
        for i, part in enumerate(self.parts):
            for opt in part.options():
                out.append(SumPosition(self.parts[:i] + (opt,) + self.parts[i + 1:]))
        return out

    def split(self) -> list[GamePosition]:
        comps = [c for part in self.parts for c in part.split()]
        comps.sort(key=lambda c: c.canonical_key())
        return comps

    def canonical_key(self) -> bytes:
        if self._key is None:
            chunks = [self.TAG]
            for part in self.parts:
                k = part.canonical_key()
                chunks.append(len(k).to_bytes(2, "big"))
                chunks.append(k)
            self._key = b"".join(chunks)
        return self._key

    def size(self) -> int:
        return sum(p.size() for p in self.parts)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SumPosition) and self.parts == other.parts

    def __hash__(self) -> int:
        return hash(self.parts)

    def __repr__(self) -> str:
        return f"SumPosition({list(self.parts)!r})"

    def __str__(self) -> str:
        return " + ".join(str(p) for p in self.parts)
