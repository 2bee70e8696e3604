"""Outcome and nimber search for normal-play impartial games."""

from .core import (
    LOSS,
    WIN,
    Couple,
    GamePosition,
    Nimber,
    Outcome,
    SumPosition,
    mex,
    nim_sum,
    nim_sum_fold,
    outcome_from_nimber,
    sum_outcome_from_nimbers,
)
from .cram import CramBoard, parse_board
from .nim import NimPosition, parse_heaps
from .oracle import Oracle, oracle_nimber, oracle_outcome
from .solver import (
    Ordering,
    SearchAborted,
    SearchStats,
    SolutionTree,
    Solver,
    TranspositionTable,
    elementary_solve,
    extract_component_nimber,
    nimber_of,
    solve_couple,
    solve_sum,
)

__all__ = [
    "LOSS", "WIN", "Couple", "GamePosition", "Nimber", "Outcome", "SumPosition",
    "mex", "nim_sum", "nim_sum_fold", "outcome_from_nimber", "sum_outcome_from_nimbers",
    "CramBoard", "parse_board", "NimPosition", "parse_heaps",
    "Oracle", "oracle_nimber", "oracle_outcome",
    "Ordering", "SearchAborted", "SearchStats", "SolutionTree", "Solver",
    "TranspositionTable", "elementary_solve", "extract_component_nimber",
    "nimber_of", "solve_couple", "solve_sum",
]
