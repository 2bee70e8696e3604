"""Command-line front end.

Verbs: ``outcome``, ``nimber``, ``table``, ``compare``.  Exit codes: 0 on
success, 2 on bad input, 3 when the couple budget runs out.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

from .core import GamePosition, SumPosition
from .cram import CramBoard, parse_board
from .nim import parse_heaps
from .solver import DEFAULT_BUDGET, Ordering, SearchAborted, Solver

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_ABORTED = 3

ABORTED = "aborted"


@dataclass
class RunReport:
    game: str
    position: str
    result: str  # "W", "L", "*n" or "aborted"
    nimber: int | None
    nodes_expanded: int
    tt_losing_couples: int
    elapsed_ms: float
    strategy: str

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> RunReport:
        return cls(**json.loads(text))

    def to_text(self) -> str:
        nim = "" if self.nimber is None else f" nimber=*{self.nimber}"
        return (f"{self.result}\n"
                f"game={self.game} position={self.position}{nim} strategy={self.strategy} "
                f"nodes_expanded={self.nodes_expanded} tt_losing_couples={self.tt_losing_couples} "
                f"elapsed_ms={self.elapsed_ms:.1f}")


def parse_position(game: str, spec: str) -> GamePosition:
    if game == "nim":
        return parse_heaps(spec)
    if game == "cram":
        return parse_board(spec)
    raise ValueError(f"unknown game {game!r}")


def parse_sum(game: str, spec: str) -> SumPosition:
    parts = spec.split("+")
    if len(parts) < 2:
        raise ValueError(f"expected a sum 'A+B', got {spec!r}")
    return SumPosition([parse_position(game, p) for p in parts])


def _run(game: str, spec: str, position: GamePosition, mode: str, ordering: str, budget: int) -> RunReport:
    solver = Solver(ordering, budget)
    start = time.perf_counter()
    nimber = None
    try:
        if mode == "outcome":
            result = str(solver.outcome(position))
        else:
            nimber = solver.nimber_of(position)
            result = f"*{nimber}"
    except SearchAborted:
        result = ABORTED
    elapsed = (time.perf_counter() - start) * 1000
    return RunReport(game, spec, result, nimber, solver.stats.couples_expanded,
                     solver.stats.losing_couples_stored, round(elapsed, 3), ordering)


def _emit_report(report: RunReport, fmt: str) -> str:
    if fmt == "json":
        return report.to_json()
    if fmt == "csv":
        buf = io.StringIO()
        row = asdict(report)
        w = csv.DictWriter(buf, fieldnames=list(row), lineterminator="\n")
        w.writeheader()
        w.writerow(row)
        return buf.getvalue().rstrip("\n")
    return report.to_text()


def _position_spec(args) -> str:
    spec = args.heaps if args.game == "nim" else args.board
    if spec is None:
        spec = args.spec
    if spec is None:
        flag = "--heaps" if args.game == "nim" else "--board"
        raise ValueError(f"missing position: pass {flag}")
    return spec


def cmd_single(args, mode: str) -> int:
    try:
        spec = _position_spec(args)
        position = parse_position(args.game, spec)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report = _run(args.game, spec, position, mode, args.order, args.budget)
    print(_emit_report(report, args.format))
    return EXIT_ABORTED if report.result == ABORTED else EXIT_OK


def parse_range(text: str) -> list[int]:
    m = re.fullmatch(r"\s*(\d+)\s*(?:(?:-|\.\.)\s*(\d+)\s*)?", text)
    if not m:
        raise ValueError(f"bad range {text!r}: use N or A-B")
    lo = int(m.group(1))
    hi = int(m.group(2)) if m.group(2) else lo
    if lo < 1 or hi < lo:
        raise ValueError(f"bad range {text!r}")
    return list(range(lo, hi + 1))


def _table_cell(rows: int, cols: int, ordering: str, budget: int) -> tuple[int, int, str]:
    solver = Solver(ordering, budget)
    board = CramBoard(rows, cols)
    try:
        return rows, cols, str(solver.nimber_of(board))
    except SearchAborted:
        below = solver.table.excluded_below(board.canonical_key())
        return rows, cols, f">{below - 1}" if below else "?"


def cmd_table(args) -> int:
    if args.game != "cram":
        print("error: table is only defined for cram boards", file=sys.stderr)
        return EXIT_INPUT
    try:
        row_range = parse_range(args.rows)
        col_range = parse_range(args.cols)
        for r in row_range:
            for c in col_range:
                CramBoard(r, c)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    cells = [(r, c) for r in row_range for c in col_range]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            futures = [pool.submit(_table_cell, r, c, args.order, args.budget) for r, c in cells]
            results = [f.result() for f in futures]
    else:
        results = [_table_cell(r, c, args.order, args.budget) for r, c in cells]
    grid = {(r, c): v for r, c, v in results}
    print(format_table(row_range, col_range, grid, args.format))
    return EXIT_OK


def format_table(row_range: list[int], col_range: list[int], grid: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps({"rows": row_range, "cols": col_range,
                           "cells": [[grid[r, c] for c in col_range] for r in row_range]})
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["rows"] + col_range)
        for r in row_range:
            w.writerow([r] + [grid[r, c] for c in col_range])
        return buf.getvalue().rstrip("\n")
    width = max([len(str(c)) for c in col_range] + [len(v) for v in grid.values()]) + 1
    lines = ["   " + "".join(str(c).rjust(width) for c in col_range)]
    for r in row_range:
        lines.append(str(r).rjust(3) + "".join(grid[r, c].rjust(width) for c in col_range))
    return "\n".join(lines)


def compare(game: str, spec: str, ordering: str = Ordering.SMALLEST_COMPONENT.value,
            budget: int = DEFAULT_BUDGET) -> dict:
    """Solve a sum with the elementary recursion and with splitting."""
    position = parse_sum(game, spec)
    elementary = Solver(ordering, budget)
    start = time.perf_counter()
    e_out = elementary.elementary_solve(position)
    e_ms = (time.perf_counter() - start) * 1000
    split = Solver(ordering, budget)
    start = time.perf_counter()
    s_out = split.outcome(position)
    s_ms = (time.perf_counter() - start) * 1000
    if e_out is not s_out:
        raise AssertionError(f"outcomes disagree on {spec}: {e_out} vs {s_out}")
    return {
        "game": game,
        "position": spec,
        "strategy": ordering,
        "elementary_outcome": str(e_out),
        "split_outcome": str(s_out),
        "elementary_nodes": elementary.stats.couples_expanded,
        "split_nodes": split.stats.couples_expanded,
        "elementary_ms": round(e_ms, 3),
        "split_ms": round(s_ms, 3),
    }


def cmd_compare(args) -> int:
    try:
        spec = args.spec
        if spec is None:
            raise ValueError("missing sum spec, e.g. 3x3+3x3")
        report = compare(args.game, spec, args.order, args.budget)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SearchAborted as exc:
        print(f"aborted: {exc}", file=sys.stderr)
        return EXIT_ABORTED
    if args.format == "json":
        print(json.dumps(report))
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(report), lineterminator="\n")
        w.writeheader()
        w.writerow(report)
        print(buf.getvalue().rstrip("\n"))
    else:
        print(f"elementary: {report['elementary_outcome']} nodes={report['elementary_nodes']}")
        print(f"split:      {report['split_outcome']} nodes={report['split_nodes']}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--game", choices=["nim", "cram"], default="cram")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="couple-expansion cap")
    common.add_argument("--order", choices=[o.value for o in Ordering],
                        default=Ordering.SMALLEST_COMPONENT.value)
    common.add_argument("--format", choices=["text", "csv", "json"], default="text")

    parser = argparse.ArgumentParser(prog="impartial", description="Impartial game solver (Nim, Cram).")
    sub = parser.add_subparsers(dest="verb", required=True)
    for verb in ("outcome", "nimber"):
        p = sub.add_parser(verb, parents=[common])
        p.add_argument("spec", nargs="?", help="position spec (alternative to --heaps/--board)")
        p.add_argument("--heaps", help="Nim heaps, e.g. 7,5,4,2")
        p.add_argument("--board", help="Cram board: RxC, or rows of . and # separated by / or newlines")
    p = sub.add_parser("table", parents=[common])
    p.add_argument("--rows", required=True, help="row range, e.g. 3 or 3-5")
    p.add_argument("--cols", required=True, help="column range, e.g. 3-9")
    p.add_argument("--jobs", type=int, default=1)
    p = sub.add_parser("compare", parents=[common])
    p.add_argument("spec", nargs="?", help="sum of positions, e.g. 3x3+3x3")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if args.budget <= 0:
        print("error: --budget must be positive", file=sys.stderr)
        return EXIT_INPUT
    if args.verb in ("outcome", "nimber"):
        return cmd_single(args, args.verb)
    if args.verb == "table":
        return cmd_table(args)
    return cmd_compare(args)


if __name__ == "__main__":
    sys.exit(main())
