"""Oracle-equivalence suites, one per registered reduction id.

Each suite draws random instances, runs the reduction-based solver and an
independent reference, and stops at the first disagreement.  ``corrupt``
perturbs the reduction side's answer, a negative control showing that the
suites can fail and that counterexample files replay the failure.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import partial
from typing import Any, Callable, Optional

import numpy as np

from .. import chains, coinchange, lowrank, nearlinear, oracles
from ..core import solve_naive, solve_via_static
from ..ext import INF
from ..minplus import minplus_naive
from .instances import InstanceFile, UsageError, generate, save, to_domain
from .solvers import jsonable

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def tamper(value):
    """Deterministically break an answer so it can never equal the original."""
    if isinstance(value, (bool, np.bool_)):
        return not value
    if isinstance(value, np.ndarray):
        out = value.copy()
        finite = np.flatnonzero(out != INF)
        if finite.size:
            out[finite[-1]] += 1
        else:
            out[-1] = 0
        return out
    if value is None:
        return (1, 1)
    if isinstance(value, tuple):
        return None
    return 0 if int(value) == INF else int(value) + 1


def _same(x, y) -> bool:
    return jsonable(x) == jsonable(y)


# A check returns None on agreement or a short description of the mismatch.
Check = Callable[[Any, Callable], Optional[str]]


def _compare(label: str, got, want) -> Optional[str]:
    if _same(got, want):
        return None
    g, w = jsonable(got), jsonable(want)
    if isinstance(g, list) and isinstance(w, list) and len(g) == len(w):
        k = next(i for i, (a, b) in enumerate(zip(g, w)) if a != b)
        return f"{label}: first difference at index {k}: got {g[k]}, want {w[k]}"
    return f"{label}: got {g}, want {w}"


def _check_lrlws(inst, bend):
    art = lowrank.reduce_mininnprod_to_lowrank(inst)
    allin = partial(lowrank.allinnprod_via_mininnprod, oracle=lowrank.mininnprod_naive)
    solver = partial(lowrank.static_lowrank_to_allinnprod, allinnprod=allin)
    t = bend(solve_via_static(art.target.model(), solver))
    products = inst.a @ inst.b.T
    msg = _compare("T[2n+1] vs min product", int(t[art.meta["value_index"]]), int(products.min()))
    msg = msg or _compare("decision", art.extract(t), lowrank.mininnprod_naive(inst))
    if msg is None and lowrank.mininnprod_naive(inst):
        i, j = lowrank.mininnprod_witness(inst)
        if int(products[i - 1, j - 1]) > inst.r:
            msg = f"witness ({i}, {j}) has product {products[i - 1, j - 1]} > r={inst.r}"
    return msg


def _check_static_lowrank(inst, bend):
    got = bend(solve_via_static(inst.model(), lowrank.static_lowrank_to_allinnprod))
    return _compare("table", got, solve_naive(inst.model()))


def _check_all_to_min(inst, bend):
    log: list = []
    got = bend(lowrank.allinnprod_via_mininnprod(inst, round_log=log))
    msg = _compare("column minima", got, lowrank.allinnprod_naive(inst))
    rounds = math.ceil(math.log2(2 * inst.product_bound() + 1))
    if msg is None and len(log) > rounds:
        msg = f"{len(log)} rounds exceed ceil(log2(2B+1)) = {rounds}"
    return msg


def _check_conv(ab, bend):
    a, b = ab
    art = coinchange.reduce_minplus_to_oicc(a, b)
    t = coinchange.solve_oicc(art.target)
    try:
        art.meta["gadget"].check_ranges(t, a, b)
    except AssertionError as exc:
        return f"gadget identity: {exc}"
    return _compare("convolution", bend(art.extract(t)), minplus_naive(a, b))


def _check_static_cc(inst, bend):
    return _compare("table", bend(coinchange.oicc_fast(inst)), coinchange.solve_oicc(inst))


def _check_uknap(inst, bend):
    art = coinchange.cc_to_unbounded_knapsack(inst)
    got = bend(art.extract(oracles.unbounded_knapsack_dp(art.target.p)))
    msg = _compare("coin change via knapsack", got, coinchange.solve_cc(inst))
    if msg:
        return msg
    # the other direction on profits read off the same coins
    p = np.where(inst.w == INF, np.iinfo(np.int64).min, np.abs(np.where(inst.w == INF, 0, inst.w)))
    kn = coinchange.KnapsackInstance(p)
    return _compare("knapsack via oicc", bend(coinchange.solve_unbounded_knapsack(kn)), oracles.unbounded_knapsack_dp(p))


def _check_oicc_via_cc(inst, bend):
    return _compare("table", bend(coinchange.oicc_via_cc(inst)), coinchange.solve_oicc(inst))


def _check_chain_to_sel(inst, bend):
    return _compare("least chain weight", bend(chains.chain_lws_fast(inst)), chains.chain_lws_naive(inst))


def _check_sel_to_chain(inst, bend):
    return _compare("selection", bend(chains.selection_via_chain(inst)), chains.selection_naive(inst) is not None)


def _check_lis(inst, bend):
    got = bend(nearlinear.lis_length(inst))
    return _compare("vs quadratic", got, nearlinear.lis_quadratic(inst)) or _compare(
        "vs patience", got, oracles.lis_patience(inst.x)
    )


def _check_uss(inst, bend):
    return _compare("reachability", bend(nearlinear.unbounded_subset_sum(inst)), oracles.subset_sum_bitset(inst.n, inst.S))


def _check_concave(inst, bend):
    return _compare("table", bend(nearlinear.concave_lws(inst)), solve_naive(inst.model()))


@dataclass(frozen=True)
class Suite:
    kind: str
    check: Check
    about: str
    params: dict = field(default_factory=dict)
    kinds: tuple = ()


SUITES: dict[str, Suite] = {
    "lrlws-lb": Suite("mininnprod", _check_lrlws, "MinInnProd through low-rank LWS, AllInnProd and back", {"d": 3, "W": 6}),
    "static-lowrank": Suite("lowrank", _check_static_lowrank, "static low-rank batches as AllInnProd"),
    "all-to-min": Suite("mininnprod", _check_all_to_min, "AllInnProd from MinInnProd witnesses", {"d": 3, "W": 6}),
    "conv-to-oicc": Suite("minplus", _check_conv, "(min,+)-convolution inside one coin change table"),
    "static-cc": Suite("toeplitz", _check_static_cc, "static coin change batches as (min,+)-convolutions"),
    "uknap": Suite("toeplitz", _check_uknap, "coin change and unbounded knapsack, both directions"),
    "oicc-via-cc": Suite("toeplitz", _check_oicc_via_cc, "full coin change table from single-target calls", {"W": 8}),
    "chain-to-sel": Suite(
        "chain-boxes", _check_chain_to_sel, "chain LWS through a selection oracle", kinds=("chain-boxes", "chain-sets")
    ),
    "sel-to-chain": Suite("selection", _check_sel_to_chain, "selection through the sentinel chain gadget"),
    "lis": Suite("lis", _check_lis, "near-linear LIS"),
    "uss": Suite("uss", _check_uss, "unbounded subset sum by boolean convolution"),
    "concave": Suite("concave-refuel", _check_concave, "concave LWS by SMAWK"),
}


@dataclass
class VerifyResult:
    reduction: str
    trials: int
    passed: int
    failure: Optional[str] = None
    counterexample: Optional[InstanceFile] = None

    @property
    def ok(self) -> bool:
        return self.failure is None

    def summary(self) -> str:
        if self.ok:
            return f"PASS {self.reduction}: {self.passed}/{self.trials} trials agree"
        return f"FAIL {self.reduction}: trial {self.passed + 1}/{self.trials}: {self.failure}"


def _suite(reduction: str) -> Suite:
    if reduction not in SUITES:
        raise UsageError(f"unknown reduction id {reduction!r}; expected one of {', '.join(SUITES)}")
    return SUITES[reduction]


def check_instance(reduction: str, inst: InstanceFile, corrupt: bool = False) -> Optional[str]:
    """Run one suite on one instance; None means agreement."""
    suite = _suite(reduction)
    allowed = suite.kinds or (suite.kind,)
    if inst.kind not in allowed:
        raise UsageError(f"{reduction} runs on {'/'.join(allowed)}, not {inst.kind}")
    bend = tamper if corrupt else (lambda v: v)
    return suite.check(to_domain(inst), bend)


def verify(
    reduction: str,
    n: int,
    seed: int,
    trials: int,
    corrupt: bool = False,
    out: Optional[str] = None,
    kind: Optional[str] = None,
    **params,
) -> VerifyResult:
    """Random trials with sizes in [1, n]; the first mismatch is saved to ``out``."""
    suite = _suite(reduction)
    kind = kind or suite.kind
    if kind not in (suite.kinds or (suite.kind,)):
        raise UsageError(f"{reduction} runs on {'/'.join(suite.kinds or (suite.kind,))}, not {kind}")
    if n < 1 or trials < 1:
        raise UsageError("n and trials must be positive")
    rng = np.random.default_rng(int(seed) & _MASK64)
    merged = {**suite.params, **params}
    for k in range(trials):
        size = int(rng.integers(1, n + 1))
        inst = generate(kind, size, (int(seed) + (k + 1) * _GOLDEN) & _MASK64, **merged)
        failure = check_instance(reduction, inst, corrupt)
        if failure is not None:
            inst.meta = {"reduction": reduction, "trial": k, "corrupt": corrupt, "failure": failure}
            if out:
                save(inst, out)
            return VerifyResult(reduction, trials, k, failure, inst)
    return VerifyResult(reduction, trials, trials)


def replay(inst: InstanceFile, corrupt: Optional[bool] = None) -> Optional[str]:
    """Re-run the suite recorded in a counterexample file."""
    reduction = inst.meta.get("reduction")
    if reduction is None:
        raise UsageError("instance file records no reduction id")
    if corrupt is None:
        corrupt = bool(inst.meta.get("corrupt", False))
    return check_instance(reduction, inst, corrupt)
