"""Median-of-3 timing with work counters and doubling ratios."""
from __future__ import annotations

import statistics
from dataclasses import dataclass
from typing import Optional, Sequence

from .instances import UsageError, generate
from .solvers import RunReport, run

HEADER = "kind,size,solver,answer_digest,queries,oracle_calls,cells,wall_ns"


def work(report: RunReport) -> int:
    """Total counted work: weight queries, oracle calls and convolution cells."""
    c = report.counters
    return c["queries"] + c["oracle_calls"] + c["cells"]


@dataclass
class BenchRow:
    report: RunReport
    ratio: Optional[float] = None  # work(size) / work(previous size) for the same solver


def bench(
    kind: str,
    sizes: Sequence[int],
    solver_ids: Sequence[str],
    seed: int,
    repeats: int = 3,
    **params,
) -> list[BenchRow]:
    """Run each solver on one generated instance per size, sequentially."""
    sizes = list(sizes)
    if not sizes or sizes != sorted(sizes):
        raise UsageError("sizes must be given in ascending order")
    rows: list[BenchRow] = []
    last: dict[str, RunReport] = {}
    for size in sizes:
        inst = generate(kind, size, seed, **params)
        for sid in solver_ids:
            reports = [run(inst, sid) for _ in range(repeats)]
            rep = reports[0]
            if any(r.answer_digest != rep.answer_digest or r.counters != rep.counters for r in reports):
                raise RuntimeError(f"{sid} is not deterministic on {kind} n={size}")
            rep.wall_ns = int(statistics.median(r.wall_ns for r in reports))
            ratio = None
            prev = last.get(sid)
            if prev is not None and work(prev) > 0:
                ratio = work(rep) / work(prev)
            last[sid] = rep
            rows.append(BenchRow(rep, ratio))
    return rows


def format_rows(rows: Sequence[BenchRow]) -> str:
    return "\n".join([HEADER] + [r.report.row() for r in rows]) + "\n"


def format_text(rows: Sequence[BenchRow]) -> str:
    lines = [f"{'kind':<15}{'size':>8}  {'solver':<20}{'work':>14}{'ratio':>8}{'wall ms':>12}  digest"]
    for r in rows:
        rep = r.report
        ratio = "" if r.ratio is None else f"{r.ratio:.2f}"
        lines.append(
            f"{rep.kind:<15}{rep.size:>8}  {rep.solver:<20}{work(rep):>14}{ratio:>8}"
            f"{rep.wall_ns / 1e6:>12.2f}  {rep.answer_digest}"
        )
    return "\n".join(lines) + "\n"
