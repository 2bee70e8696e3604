"""Couple-based outcome and nimber search.

The search works on couples ``(P, *n)``, i.e. the sum of a position and a Nim
heap.  A couple is losing exactly when the nimber of ``P`` is ``n``, so one
outcome search answers both "who wins" and "what is the nimber" questions:

* :meth:`Solver.solve_couple` recurses over the options of a couple, handing
  splittable positions to :meth:`Solver.solve_sum`.
* :meth:`Solver.solve_sum` computes the nimbers of all components but one,
  folds them into the heap and searches the single remaining couple.
* :meth:`Solver.nimber_of` tries ``*0, *1, *2, ...`` until a couple loses.

:meth:`Solver.elementary_solve` is the plain outcome recursion over the whole
position, kept as a baseline.  Solution trees are not built during the
search; every proven fact stays in the store and :meth:`Solver.solution_tree`
materializes the tree from it afterwards.
"""

from __future__ import annotations

import enum
import sys
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .core import (
    LOSS,
    WIN,
    Couple,
    GamePosition,
    Nimber,
    Outcome,
    SumPosition,
    mex,
    nim_sum_fold,
)

DEFAULT_BUDGET = 10**8

if sys.getrecursionlimit() < 10_000:
    sys.setrecursionlimit(10_000)


class Ordering(enum.Enum):
    NATURAL = "natural"
    FEWEST_MOVES = "fewest-moves"
    SMALLEST_COMPONENT = "smallest-component"


class SearchAborted(Exception):
    """The couple-expansion budget ran out before the search finished."""

    def __init__(self, budget: int, stats: SearchStats):
        super().__init__(f"search aborted after {budget} couple expansions")
        self.budget = budget
        self.stats = stats


class TreeError(ValueError):
    """A solution tree violates its structural invariants."""


class Relation(enum.Enum):
    EQUAL = "equal"
    DIFFERENT = "different"


@dataclass
class SearchStats:
    couples_expanded: int = 0
    tt_hits: int = 0
    losing_couples_stored: int = 0
    max_nimber_tried: Nimber = 0

    def as_dict(self) -> dict[str, int]:
        return {
            "couples_expanded": self.couples_expanded,
            "tt_hits": self.tt_hits,
            "losing_couples_stored": self.losing_couples_stored,
            "max_nimber_tried": self.max_nimber_tried,
        }


# -- transposition store ------------------------------------------------------


@dataclass(frozen=True)
class ExactNimber:
    value: Nimber


@dataclass(frozen=True)
class ExcludedBelow:
    bound: int


@dataclass(frozen=True)
class TranspositionEntry:
    key: bytes
    knowledge: ExactNimber | ExcludedBelow


class TranspositionTable:
    """Proven knowledge about canonical positions.

    ``exact`` holds the nimber of every position whose losing couple was
    found.  ``excluded`` holds, per key, a bit set of heap values ``k`` for
    which ``(P, *k)`` was proven winning.  ``outcomes`` is a separate
    namespace used only by the elementary baseline.

    With ``max_excluded`` set, ``excluded`` entries are evicted least recently
    used first.  Exact entries are never evicted.
    """

    def __init__(self, max_excluded: int | None = None):
        self.exact: dict[bytes, Nimber] = {}
        self.max_excluded = max_excluded
        self.excluded: dict[bytes, int] = OrderedDict() if max_excluded else {}
        self.outcomes: dict[bytes, Outcome] = {}

    def __len__(self) -> int:
        return len(self.exact.keys() | self.excluded.keys())

    def probe(self, key: bytes, n: Nimber) -> Outcome | None:
        e = self.exact.get(key)
        if e is not None:
            return LOSS if e == n else WIN
        bits = self.excluded.get(key)
        if bits is not None:
            if self.max_excluded:
                self.excluded.move_to_end(key)  # type: ignore[attr-defined]
            if bits >> n & 1:
                return WIN
        return None

    def record_loss(self, key: bytes, n: Nimber) -> bool:
        """Store ``nimber(key) == n``; returns True if this is new."""
        old = self.exact.get(key)
        if old is not None:
            if old != n:
                raise AssertionError(f"conflicting nimbers {old} and {n} for {key!r}")
            return False
        self.exact[key] = n
        return True

    def record_win(self, key: bytes, n: Nimber) -> None:
        self.excluded[key] = self.excluded.get(key, 0) | (1 << n)
        if self.max_excluded:
            self.excluded.move_to_end(key)  # type: ignore[attr-defined]
            while len(self.excluded) > self.max_excluded:
                self.excluded.popitem(last=False)  # type: ignore[call-arg]

    def exact_nimber(self, key: bytes) -> Nimber | None:
        return self.exact.get(key)

    def excluded_values(self, key: bytes) -> set[int]:
        bits = self.excluded.get(key, 0)
        return {k for k in range(bits.bit_length()) if bits >> k & 1}

    def excluded_below(self, key: bytes) -> int:
        """Largest ``k`` with ``(P, *0) ... (P, *k-1)`` all proven winning."""
        bits = self.excluded.get(key, 0)
        return (~bits & (bits + 1)).bit_length() - 1

    def entry(self, key: bytes) -> TranspositionEntry | None:
        e = self.exact.get(key)
        if e is not None:
            return TranspositionEntry(key, ExactNimber(e))
        if key in self.excluded:
            return TranspositionEntry(key, ExcludedBelow(self.excluded_below(key)))
        return None


# -- solution trees -----------------------------------------------------------


@dataclass(eq=False)
class SolutionTree:
    """A node of a solution tree.

    A winning node has one losing child, a losing node one winning child per
    option.  A *reduced* node stands for a couple whose position splits: it
    has no children, but ``reduced_to`` is the single-component couple it was
    reduced to and ``component_proofs`` are losing nodes fixing the nimbers of
    the other components.
    """

    couple: Couple
    outcome: Outcome
    children: list[SolutionTree] = field(default_factory=list)
    reduced_to: SolutionTree | None = None
    component_proofs: list[SolutionTree] = field(default_factory=list)

    @property
    def is_reduced(self) -> bool:
        return self.reduced_to is not None

    def iter_nodes(self) -> Iterable[SolutionTree]:
        seen: set[int] = set()
        stack = [self]
        while stack:
            node = stack.pop()
            if id(node) in seen:
                continue
            seen.add(id(node))
            yield node
            stack.extend(node.children)
            stack.extend(node.component_proofs)
            if node.reduced_to is not None:
                stack.append(node.reduced_to)

    def size(self) -> int:
        return sum(1 for _ in self.iter_nodes())


EMPTY = SumPosition(())


def _couple_key(c: Couple) -> tuple[bytes, int]:
    return c.position.canonical_key(), c.nimber


def validate_tree(tree: SolutionTree) -> None:
    """Check every node of ``tree`` against the game rules; raise TreeError."""
    for node in tree.iter_nodes():
        c = node.couple
        if node.is_reduced:
            proofs = node.component_proofs
            if any(p.outcome is not LOSS for p in proofs):
                raise TreeError(f"{c}: component proof is not losing")
            folded = nim_sum_fold(p.couple.nimber for p in proofs) ^ c.nimber
            if node.reduced_to.couple.nimber != folded:
                raise TreeError(f"{c}: reduced heap {node.reduced_to.couple.nimber} != {folded}")
            if node.reduced_to.outcome is not node.outcome:
                raise TreeError(f"{c}: reduced couple has a different outcome")
            if node.children:
                raise TreeError(f"{c}: reduced node with children")
            continue
        options = c.options()
        opt_keys = sorted(_couple_key(o) for o in options)
        child_keys = [_couple_key(ch.couple) for ch in node.children]
        if node.outcome is WIN:
            if len(node.children) != 1:
                raise TreeError(f"{c}: winning node needs exactly one child, has {len(node.children)}")
            if node.children[0].outcome is not LOSS:
                raise TreeError(f"{c}: child of winning node is not losing")
            if child_keys[0] not in opt_keys:
                raise TreeError(f"{c}: child {node.children[0].couple} is not an option")
        else:
            if sorted(child_keys) != opt_keys:
                raise TreeError(f"{c}: losing node children do not match its {len(options)} options")
            if any(ch.outcome is not WIN for ch in node.children):
                raise TreeError(f"{c}: losing node has a losing child")


# -- ordering -----------------------------------------------------------------


def _move_count(p: GamePosition) -> int:
    counter = getattr(p, "move_count", None)
    return counter() if counter is not None else len(p.options())


def _component_sort_key(comps: Sequence[GamePosition]) -> tuple:
    sizes = [c.size() for c in comps]
    return (max(sizes, default=0), sum(sizes), b"|".join(c.canonical_key() for c in comps))


def option_sort_key(comps: Sequence[GamePosition], ordering: Ordering):
    if ordering is Ordering.FEWEST_MOVES:
        return sum(_move_count(c) for c in comps)
    if ordering is Ordering.SMALLEST_COMPONENT:
        return _component_sort_key(comps)
    return 0


def order_options(options: Sequence[Couple], ordering: Ordering) -> list[Couple]:
    """Stable reordering of ``options``.

    NATURAL keeps generation order.  FEWEST_MOVES sorts by the number of
    moves available in the position part.  SMALLEST_COMPONENT sorts by the
    size of the largest component left after splitting, then total size, then
    canonical key.
    """
    if ordering is Ordering.NATURAL:
        return list(options)
    return sorted(options, key=lambda c: option_sort_key(c.position.split(), ordering))


# -- the solver ---------------------------------------------------------------


@dataclass(frozen=True)
class Extraction:
    component: int
    nimber: Nimber
    relation: Relation


class Solver:
    """One search context: a store, statistics, an ordering and a budget.

    A solver is not thread-safe; run independent searches with independent
    solvers.
    """

    def __init__(
        self,
        ordering: Ordering | str = Ordering.SMALLEST_COMPONENT,
        budget: int = DEFAULT_BUDGET,
        table: TranspositionTable | None = None,
    ):
        self.ordering = Ordering(ordering)
        self.budget = budget
        self.table = table if table is not None else TranspositionTable()
        self.stats = SearchStats()

    # -- public API --

    def solve_couple(self, couple: Couple | GamePosition, n: Nimber | None = None) -> Outcome:
        if isinstance(couple, Couple):
            p, heap = couple.position, couple.nimber
        else:
            p, heap = couple, n or 0
        if p.is_component():
            return self._solve_component(p, heap)
        return self.solve_sum(p.split(), heap)

    def outcome(self, p: GamePosition) -> Outcome:
        return self.solve_couple(Couple(p, 0))

    def solve_sum(self, components: Sequence[GamePosition], n: Nimber = 0) -> Outcome:
        comps = [c for p in components for c in (p.split() if not p.is_component() else [p])]
        if not comps:
            return LOSS if n == 0 else WIN
        if len(comps) == 1:
            return self._solve_component(comps[0], n)
        deferred = self._pick_deferred(comps)
        for i, c in enumerate(comps):
            if i != deferred:
                n ^= self._nimber_component(c)
        return self._solve_component(comps[deferred], n)

    def nimber_of(self, p: GamePosition) -> Nimber:
        if p.is_component():
            return self._nimber_component(p)
        comps = p.split()
        value = nim_sum_fold(self._nimber_component(c) for c in comps)
        if self.table.record_loss(p.canonical_key(), value):
            self.stats.losing_couples_stored += 1
        return value

    def elementary_solve(self, p: GamePosition) -> Outcome:
        """Win/Loss recursion over the whole position: no split, no heap."""
        outcomes = self.table.outcomes
        key = p.canonical_key()
        known = outcomes.get(key)
        if known is not None:
            self.stats.tt_hits += 1
            return known
        self._expand(0)
        options = p.options()
        for q in options:
            if outcomes.get(q.canonical_key()) is LOSS:
                self.stats.tt_hits += 1
                outcomes[key] = WIN
                return WIN
        if self.ordering is not Ordering.NATURAL:
            options = sorted(options, key=lambda q: option_sort_key(q.split(), self.ordering))
        result = LOSS
        for q in options:
            if self.elementary_solve(q) is LOSS:
                result = WIN
                break
        outcomes[key] = result
        return result

    # -- internals --

    def _expand(self, n: Nimber) -> None:
        stats = self.stats
        stats.couples_expanded += 1
        if n > stats.max_nimber_tried:
            stats.max_nimber_tried = n
        if stats.couples_expanded > self.budget:
            raise SearchAborted(self.budget, stats)

    def _pick_deferred(self, comps: Sequence[GamePosition]) -> int:
        """Index of the component left for the couple search.

        The biggest component whose nimber is not yet stored; the biggest
        overall when every nimber is known.  Ties go to the larger key.
        """
        exact = self.table.exact
        pool = [i for i, c in enumerate(comps) if c.canonical_key() not in exact] or range(len(comps))
        return max(pool, key=lambda i: (comps[i].size(), comps[i].canonical_key(), i))

    def _nimber_component(self, c: GamePosition) -> Nimber:
        known = self.table.exact.get(c.canonical_key())
        if known is not None:
            self.stats.tt_hits += 1
            return known
        k = 0
        while self._solve_component(c, k) is WIN:
            k += 1
        return k

    def _solve_component(self, p: GamePosition, n: Nimber) -> Outcome:
        table = self.table
        key = p.canonical_key()
        known = table.probe(key, n)
        if known is not None:
            self.stats.tt_hits += 1
            return known
        self._expand(n)

        exact = table.exact
        prepared = []
        for q in p.options():
            comps = q.split() if not q.is_component() else [q]
            # an option already known to lose settles the couple at once
            folded = n
            for c in comps:
                e = exact.get(c.canonical_key())
                if e is None:
                    break
                folded ^= e
            else:
                if folded == 0:
                    self.stats.tt_hits += 1
                    table.record_win(key, n)
                    return WIN
            prepared.append((q, comps))

        if self.ordering is not Ordering.NATURAL:
            ordering = self.ordering
            prepared.sort(key=lambda qc: option_sort_key(qc[1], ordering))
        for _, comps in prepared:
            if self.solve_sum(comps, n) is LOSS:
                table.record_win(key, n)
                return WIN
        for i in range(n):
            if self._solve_component(p, i) is LOSS:
                table.record_win(key, n)
                return WIN
        if table.record_loss(key, n):
            self.stats.losing_couples_stored += 1
        return LOSS

    # -- solution trees --

    def _known(self, p: GamePosition, n: Nimber) -> Outcome | None:
        """Outcome of ``(p, *n)`` as far as the store proves it."""
        if p.is_component():
            return self.table.probe(p.canonical_key(), n)
        comps = p.split()
        unknown = []
        for c in comps:
            e = self.table.exact.get(c.canonical_key())
            if e is None:
                unknown.append(c)
            else:
                n ^= e
        if not unknown:
            return LOSS if n == 0 else WIN
        if len(unknown) == 1:
            return self.table.probe(unknown[0].canonical_key(), n)
        return None

    def solution_tree(self, couple: Couple | GamePosition) -> SolutionTree:
        """Solution tree of an already solved couple, rebuilt from the store.

        Only stored facts are used; no search happens and the statistics do
        not move.  Raises KeyError if the store does not prove the couple
        (e.g. it was never solved, or entries were evicted).
        """
        if not isinstance(couple, Couple):
            couple = Couple(couple, 0)
        return self._replay(couple.position, couple.nimber, {})

    def _replay(self, p: GamePosition, n: Nimber, memo: dict) -> SolutionTree:
        if p.is_component():
            return self._replay_component(p, n, memo)
        comps = p.split()
        if not comps:
            child = self._replay_heap(n, memo)
            return SolutionTree(Couple(p, n), child.outcome, reduced_to=child)
        exact = self.table.exact
        unknown = [i for i, c in enumerate(comps) if c.canonical_key() not in exact]
        if len(unknown) > 1:
            raise KeyError(f"({p}, *{n}) is not proven by the store")
        deferred = unknown[0] if unknown else self._pick_deferred(comps)
        proofs = []
        heap = n
        for i, c in enumerate(comps):
            if i != deferred:
                v = exact[c.canonical_key()]
                heap ^= v
                proofs.append(self._replay_component(c, v, memo))
        child = self._replay_component(comps[deferred], heap, memo)
        return SolutionTree(Couple(p, n), child.outcome, reduced_to=child, component_proofs=proofs)

    def _replay_heap(self, n: Nimber, memo: dict) -> SolutionTree:
        mkey = (b"", n)
        node = memo.get(mkey)
        if node is None:
            if n == 0:
                node = SolutionTree(Couple(EMPTY, 0), LOSS)
            else:
                node = SolutionTree(Couple(EMPTY, n), WIN, [self._replay_heap(0, memo)])
            memo[mkey] = node
        return node

    def _replay_component(self, p: GamePosition, n: Nimber, memo: dict) -> SolutionTree:
        key = p.canonical_key()
        node = memo.get((key, n))
        if node is not None:
            return node
        outcome = self.table.probe(key, n)
        if outcome is None:
            raise KeyError(f"({p}, *{n}) is not proven by the store")
        node = SolutionTree(Couple(p, n), outcome)
        memo[(key, n)] = node
        if outcome is WIN:
            for q in p.options():
                if self._known(q, n) is LOSS:
                    node.children.append(self._replay(q, n, memo))
                    break
            else:
                e = self.table.exact.get(key)
                if e is None or e >= n:
                    raise KeyError(f"no stored losing option for ({p}, *{n})")
                node.children.append(self._replay_component(p, e, memo))
        else:
            for q in p.options():
                node.children.append(self._replay(q, n, memo))
            for i in range(n):
                node.children.append(self._replay_component(p, i, memo))
        return node

    def elementary_tree(self, p: GamePosition) -> SolutionTree:
        """Solution tree of a position solved by :meth:`elementary_solve`."""
        return self._replay_elementary(p, {})

    def _replay_elementary(self, p: GamePosition, memo: dict) -> SolutionTree:
        key = p.canonical_key()
        node = memo.get(key)
        if node is not None:
            return node
        outcome = self.table.outcomes.get(key)
        if outcome is None:
            raise KeyError(f"{p} has no stored outcome")
        node = SolutionTree(Couple(p, 0), outcome)
        memo[key] = node
        if outcome is WIN:
            for q in p.options():
                if self.table.outcomes.get(q.canonical_key()) is LOSS:
                    node.children.append(self._replay_elementary(q, memo))
                    break
            else:
                raise KeyError(f"no stored losing option for {p}")
        else:
            node.children.extend(self._replay_elementary(q, memo) for q in p.options())
        return node


# -- module-level conveniences ------------------------------------------------


def solve_couple(couple: Couple, table: TranspositionTable | None = None,
                 ordering: Ordering | str = Ordering.SMALLEST_COMPONENT,
                 budget: int = DEFAULT_BUDGET) -> Outcome:
    return Solver(ordering, budget, table).solve_couple(couple)


def solve_sum(components: Sequence[GamePosition], n: Nimber = 0,
              table: TranspositionTable | None = None,
              ordering: Ordering | str = Ordering.SMALLEST_COMPONENT,
              budget: int = DEFAULT_BUDGET) -> Outcome:
    return Solver(ordering, budget, table).solve_sum(components, n)


def nimber_of(p: GamePosition, table: TranspositionTable | None = None,
              ordering: Ordering | str = Ordering.SMALLEST_COMPONENT,
              budget: int = DEFAULT_BUDGET) -> Nimber:
    return Solver(ordering, budget, table).nimber_of(p)


def elementary_solve(p: GamePosition, table: TranspositionTable | None = None,
                     ordering: Ordering | str = Ordering.SMALLEST_COMPONENT,
                     budget: int = DEFAULT_BUDGET) -> Outcome:
    return Solver(ordering, budget, table).elementary_solve(p)


# -- reading nimbers off a solution tree of a two-part sum ---------------------


def _parts(node: SolutionTree) -> tuple[GamePosition, GamePosition]:
    p = node.couple.position
    if not isinstance(p, SumPosition) or len(p.parts) != 2 or node.couple.nimber != 0:
        raise TreeError(f"{node.couple} is not a two-part sum with heap *0")
    return p.parts


def _moved_part(parent: SolutionTree, child: SolutionTree) -> int:
    a, b = _parts(parent)
    ca, cb = _parts(child)
    same_a = ca.canonical_key() == a.canonical_key()
    same_b = cb.canonical_key() == b.canonical_key()
    if same_b and not same_a:
        return 0
    if same_a and not same_b:
        return 1
    raise TreeError(f"{child.couple} is not one move away from {parent.couple}")


def extract_component_nimber(tree: SolutionTree) -> Extraction:
    """Read one component's nimber off a solution tree of ``A + B``.

    Returns the index of the component whose nimber was determined, that
    nimber, and whether the other component's nimber is equal or different.
    Walks the recorded nodes only; the game is never consulted for options.
    """
    memo: dict[int, Extraction] = {}

    def walk(node: SolutionTree) -> Extraction:
        hit = memo.get(id(node))
        if hit is not None:
            return hit
        _parts(node)
        if node.is_reduced:
            raise TreeError(f"{node.couple}: reduced node in an elementary tree")
        if node.outcome is WIN:
            if len(node.children) != 1 or node.children[0].outcome is not LOSS:
                raise TreeError(f"{node.couple}: winning node needs one losing child")
            child = node.children[0]
            moved = _moved_part(node, child)
            # both parts of the losing child share this nimber; the unmoved
            # one is also a part of this node
            res = Extraction(1 - moved, walk(child).nimber, Relation.DIFFERENT)
        else:
            seen = []
            res = None
            for child in node.children:
                if child.outcome is not WIN:
                    raise TreeError(f"{node.couple}: losing node has a losing child")
                if _moved_part(node, child) != 0:
                    continue
                sub = walk(child)
                if sub.component == 1:
                    res = Extraction(1, sub.nimber, Relation.EQUAL)
                    break
                seen.append(sub.nimber)
            if res is None:
                res = Extraction(0, mex(seen), Relation.EQUAL)
        memo[id(node)] = res
        return res

    return walk(tree)
