"""Solver registry and single-run reports."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import partial
from typing import Any, Callable

import numpy as np

from .. import chains, coinchange, lowrank, nearlinear, oracles
from ..core import WorkStats, solve_naive, solve_static_naive, solve_via_static
from ..ext import ArithmeticOverflow, format_array, format_scalar
from ..minplus import minplus_naive
from .instances import InstanceFile, UsageError, digest, to_domain


@dataclass(frozen=True)
class Solver:
    kinds: tuple
    fn: Callable[[Any, WorkStats], Any]
    about: str


_MODEL_KINDS = ("explicit", "lowrank", "toeplitz", "chain-boxes", "chain-sets", "lis", "uss", "concave-refuel")


def _model(obj, stats):
    # explicit instances decode straight to a model; the rest build one
    if hasattr(obj, "model"):
        return obj.model(stats)
    obj.stats = stats
    return obj


def _lowrank_static(obj, stats, allinnprod):
    solver = partial(lowrank.static_lowrank_to_allinnprod, allinnprod=allinnprod)
    return solve_via_static(obj.model(stats), solver)


def _mininnprod_lowrank(inst, stats):
    art = lowrank.reduce_mininnprod_to_lowrank(inst)
    allin = partial(lowrank.allinnprod_via_mininnprod, oracle=lowrank.mininnprod_naive, stats=stats)
    t = _lowrank_static(art.target, stats, allin)
    return art.extract(t)


def _cc_knapsack(inst, stats):
    art = coinchange.cc_to_unbounded_knapsack(inst)
    return art.extract(coinchange.solve_unbounded_knapsack(art.target, partial(coinchange.solve_oicc, stats=stats)))


def _minplus_oicc(ab, stats):
    a, b = ab
    art = coinchange.reduce_minplus_to_oicc(a, b)
    return art.extract(coinchange.solve_oicc(art.target, stats))


SOLVERS: dict[str, Solver] = {
    "lws-naive": Solver(_MODEL_KINDS, lambda o, s: solve_naive(_model(o, s)), "quadratic recurrence, full table"),
    "lws-static": Solver(
        _MODEL_KINDS,
        lambda o, s: solve_via_static(_model(o, s), solve_static_naive),
        "divide-and-conquer driver over naive static batches",
    ),
    "lowrank-allinnprod": Solver(
        ("lowrank",),
        lambda o, s: _lowrank_static(o, s, lowrank.allinnprod_naive),
        "static batches as AllInnProd (naive)",
    ),
    "lowrank-mininnprod": Solver(
        ("lowrank",),
        lambda o, s: _lowrank_static(
            o, s, partial(lowrank.allinnprod_via_mininnprod, oracle=lowrank.mininnprod_naive, stats=s)
        ),
        "static batches as AllInnProd through a MinInnProd decision oracle",
    ),
    "oicc-naive": Solver(("toeplitz",), lambda o, s: coinchange.solve_oicc(o, s), "quadratic coin change table"),
    "oicc-fast": Solver(
        ("toeplitz",), lambda o, s: coinchange.oicc_fast(o, minplus_naive, s), "static batches as (min,+)-convolutions"
    ),
    "oicc-via-cc": Solver(
        ("toeplitz",),
        lambda o, s: coinchange.oicc_via_cc(o, coinchange.solve_cc, s),
        "full table from a single-target coin change oracle",
    ),
    "cc-naive": Solver(("toeplitz",), lambda o, s: coinchange.solve_cc(o, s), "single target T[n]"),
    "cc-knapsack": Solver(("toeplitz",), _cc_knapsack, "single target through unbounded knapsack"),
    "knapsack-dp": Solver(("knapsack",), lambda o, s: oracles.unbounded_knapsack_dp(o.p), "textbook capacity DP"),
    "knapsack-oicc": Solver(
        ("knapsack",),
        lambda o, s: coinchange.solve_unbounded_knapsack(o, partial(coinchange.solve_oicc, stats=s)),
        "knapsack through output-intensive coin change",
    ),
    "chain-naive": Solver(("chain-boxes", "chain-sets"), lambda o, s: chains.chain_lws_naive(o, s), "quadratic chain"),
    "chain-fast": Solver(
        ("chain-boxes", "chain-sets"),
        lambda o, s: chains.chain_lws_fast(o, chains.selection_naive, s),
        "static batches through a selection oracle",
    ),
    "lis-quadratic": Solver(("lis",), lambda o, s: nearlinear.lis_quadratic(o, s), "quadratic LWS"),
    "lis-nearlinear": Solver(("lis",), lambda o, s: nearlinear.lis_length(o, s), "sorted static batches"),
    "lis-patience": Solver(("lis",), lambda o, s: oracles.lis_patience(o.x), "patience sorting"),
    "uss-quadratic": Solver(("uss",), lambda o, s: nearlinear.subset_sum_quadratic(o, s), "quadratic LWS"),
    "uss-nearlinear": Solver(("uss",), lambda o, s: nearlinear.unbounded_subset_sum(o, s), "boolean convolutions"),
    "uss-bitset": Solver(("uss",), lambda o, s: oracles.subset_sum_bitset(o.n, o.S), "big-integer bitset DP"),
    "concave-naive": Solver(("concave-refuel",), lambda o, s: solve_naive(o.model(s)), "quadratic LWS"),
    "concave-smawk": Solver(("concave-refuel",), lambda o, s: nearlinear.concave_lws(o, s), "SMAWK static batches"),
    "minplus-naive": Solver(("minplus",), lambda o, s: minplus_naive(*o, stats=s), "quadratic (min,+)-convolution"),
    "minplus-oicc": Solver(("minplus",), _minplus_oicc, "convolution through a coin change gadget"),
    "mininnprod-naive": Solver(("mininnprod",), lambda o, s: lowrank.mininnprod_naive(o), "all products"),
    "mininnprod-lowrank": Solver(
        ("mininnprod",), _mininnprod_lowrank, "low-rank LWS, static AllInnProd, MinInnProd oracle"
    ),
    "selection-naive": Solver(
        ("selection",), lambda o, s: chains.selection_naive(o) is not None, "all pairs"
    ),
    "selection-chain": Solver(
        ("selection",),
        lambda o, s: chains.selection_via_chain(o, partial(chains.chain_lws_naive, stats=s)),
        "sentinel chain gadget",
    ),
}


def solvers_for(kind: str) -> list[str]:
    return [sid for sid, sol in SOLVERS.items() if kind in sol.kinds]


def jsonable(answer) -> Any:
    if isinstance(answer, np.ndarray):
        return format_array(answer)
    if isinstance(answer, (bool, np.bool_)):
        return bool(answer)
    if answer is None:
        return None
    if isinstance(answer, (tuple, list)):
        return [jsonable(v) for v in answer]
    return format_scalar(answer)


@dataclass
class RunReport:
    instance_id: str
    kind: str
    size: int
    solver: str
    answer: Any
    answer_digest: str
    wall_ns: int
    counters: dict = field(default_factory=dict)

    def row(self) -> str:
        c = self.counters
        return ",".join(
            str(v)
            for v in (
                self.kind,
                self.size,
                self.solver,
                self.answer_digest,
                c["queries"],
                c["oracle_calls"],
                c["cells"],
                self.wall_ns,
            )
        )

    def text(self) -> str:
        shown = self.answer
        if isinstance(shown, list) and len(shown) > 16:
            shown = f"table[{len(shown)}]"
        counters = " ".join(f"{k}={v}" for k, v in self.counters.items() if v)
        return (
            f"{self.kind} n={self.size} solver={self.solver} answer={shown} "
            f"digest={self.answer_digest} {counters} wall={self.wall_ns / 1e6:.2f}ms"
        )


def run(inst: InstanceFile, solver_id: str) -> RunReport:
    """Solve one instance with one registered solver, recording work and time."""
    if solver_id not in SOLVERS:
        raise UsageError(f"unknown solver {solver_id!r}")
    sol = SOLVERS[solver_id]
    if inst.kind not in sol.kinds:
        raise UsageError(
            f"solver {solver_id} does not accept {inst.kind}; try {', '.join(solvers_for(inst.kind))}"
        )
    obj = to_domain(inst)
    stats = WorkStats()
    start = time.perf_counter_ns()
    try:
        answer = sol.fn(obj, stats)
    except ArithmeticOverflow as exc:
        raise ArithmeticOverflow(f"{solver_id} on {inst.kind} n={inst.n}: {exc}") from exc
    wall = time.perf_counter_ns() - start
    value = jsonable(answer)
    return RunReport(
        instance_id=inst.instance_id(),
        kind=inst.kind,
        size=inst.n,
        solver=solver_id,
        answer=value,
        answer_digest=digest(value),
        wall_ns=wall,
        counters=stats.as_dict(),
    )
