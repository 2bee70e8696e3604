"""Brute-force ground truth.

Plain Mex recursion over the whole game tree: no splitting, no couples, no
nimber parts.  Memoized on canonical keys only.  Intended for small
positions; there is no budget.
"""

from __future__ import annotations

import sys

from .core import LOSS, WIN, GamePosition, Nimber, Outcome, mex


class Oracle:
    def __init__(self) -> None:
        self.nimbers: dict[bytes, Nimber] = {}
        self.outcomes: dict[bytes, Outcome] = {}

    def nimber(self, p: GamePosition) -> Nimber:
        key = p.canonical_key()
        n = self.nimbers.get(key)
        if n is None:
            n = mex(self.nimber(q) for q in p.options())
            self.nimbers[key] = n
        return n

    def outcome(self, p: GamePosition) -> Outcome:
        key = p.canonical_key()
        o = self.outcomes.get(key)
        if o is None:
            o = WIN if any(self.outcome(q) is LOSS for q in p.options()) else LOSS
            self.outcomes[key] = o
        return o


_default = Oracle()

if sys.getrecursionlimit() < 10_000:
    sys.setrecursionlimit(10_000)


def oracle_nimber(p: GamePosition, oracle: Oracle | None = None) -> Nimber:
    return (oracle or _default).nimber(p)


def oracle_outcome(p: GamePosition, oracle: Oracle | None = None) -> Outcome:
    return (oracle or _default).outcome(p)
