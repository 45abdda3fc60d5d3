"""Coin change, its output-intensive form, unbounded knapsack, and the
reductions tying them to (min,+)-convolution.

A coin change instance is the weight word w_1..w_n (``w[k-1]`` is the
weight of denomination k, ``INF`` when absent); it induces the Toeplitz
model w(i, j) = w_{j-i}.  Witness indices are 1-based.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import partial
from typing import Callable, Optional

import numpy as np

from .core import (
    ReductionArtifact,
    StaticQuery,
    ToeplitzModel,
    WorkStats,
    solve_naive,
    solve_via_static,
)
from .ext import INF, MAX_FINITE, NEG_INF, ArithmeticOverflow, max_abs_finite, sat_add
from .minplus import MinPlusKernel, minplus_naive

_SAFE = MAX_FINITE // 4


@dataclass(frozen=True)
class CoinChangeInstance:
    w: np.ndarray
    W: Optional[int] = None

    def __post_init__(self):
        w = np.asarray(self.w, dtype=np.int64)
        if w.ndim != 1:
            raise ValueError("coin weights must be a vector")
        if np.any(w == NEG_INF):
            raise ValueError("coin weights are finite or INF")
        object.__setattr__(self, "w", w)
        bound = max_abs_finite(w)
        if self.W is None:
            object.__setattr__(self, "W", bound)
        elif bound > self.W:
            raise ValueError(f"weight {bound} exceeds bound W={self.W}")

    @property
    def n(self) -> int:
        return len(self.w)

    def model(self, stats: Optional[WorkStats] = None) -> ToeplitzModel:
        return ToeplitzModel(self.w, stats)


@dataclass(frozen=True)
class KnapsackInstance:
    """Profits p_1..p_n for item sizes 1..n; ``NEG_INF`` marks a missing item."""

    p: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.p, dtype=np.int64)
        if np.any((p < 0) & (p != NEG_INF)) or np.any(p == INF):
            raise ValueError("profits must be non-negative (or NEG_INF for no item)")
        object.__setattr__(self, "p", p)

    @property
    def n(self) -> int:
        return len(self.p)


@dataclass(frozen=True)
class ThresholdQuery:
    """Coin weights w~_1..w~_M and thresholds r~_1..r~_M (entries may be +-INF)."""

    w: np.ndarray
    r: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.w, dtype=np.int64)
        r = np.asarray(self.r, dtype=np.int64)
        if w.shape != r.shape or w.ndim != 1 or len(w) == 0:
            raise ValueError("w~ and r~ must be equal-length non-empty vectors")
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "r", r)


CCSolver = Callable[[CoinChangeInstance], int]


def solve_oicc(inst: CoinChangeInstance, stats: Optional[WorkStats] = None) -> np.ndarray:
    """All of T[0..n] by the quadratic recurrence."""
    return solve_naive(inst.model(stats))


def solve_cc(inst: CoinChangeInstance, stats: Optional[WorkStats] = None) -> int:
    """Minimum weight of a coin multiset of total exactly n (INF if none)."""
    if inst.n < 1:
        raise ValueError("coin change needs n >= 1")
    return int(solve_oicc(inst, stats)[inst.n])


def _pad_value(*arrays) -> int:
    bound = sum(max_abs_finite(x) for x in arrays)
    pad = 2 * bound + 1
    if 2 * pad > _SAFE:
        raise ArithmeticOverflow("padding constant overflows int64")
    return pad


def static_cc_via_minplus(
    model: ToeplitzModel,
    q: StaticQuery,
    conv: MinPlusKernel = minplus_naive,
) -> np.ndarray:
    """One static coin-change batch as a single (min,+)-convolution.

    With u = (P, T[a+1..a+N], P^N) and v = (P, w_1..w_2N) we get
    (u * v)_{N+k} = min_i T[a+i] + w_{N+k-i} = T'[a+N+k].  P is a finite
    stand-in for INF, larger than twice any finite magnitude involved, so
    results at or above P - bound are mapped back to INF.
    """
    q.check(model)
    big_n = q.big_n
    coins = model.coin_range(1, 2 * big_n)
    pad = _pad_value(q.t_in, coins)
    t = np.where(q.t_in == INF, pad, q.t_in)
    c = np.where(coins == INF, pad, coins)
    u = np.concatenate([[pad], t, np.full(big_n, pad)])
    v = np.concatenate([[pad], c])
    out = conv(u, v, stats=model.stats)[big_n + 1 : 2 * big_n + 1]
    limit = (pad - 1) // 2
    return np.where(out > limit, INF, out)


def oicc_fast(
    inst: CoinChangeInstance,
    conv: MinPlusKernel = minplus_naive,
    stats: Optional[WorkStats] = None,
) -> np.ndarray:
    """Output-intensive coin change through static batches and a convolution kernel."""
    return solve_via_static(inst.model(stats), partial(static_cc_via_minplus, conv=conv))


@dataclass(frozen=True)
class ConvGadget:
    """Bookkeeping of a (min,+)-convolution embedded in a coin change word."""

    n: int
    M: int
    shift_a: int
    shift_b: int

    @property
    def shift(self) -> int:
        return self.shift_a + self.shift_b

    def table_index(self, k: int) -> int:
        """Index of T holding (a * b)_k, for 0 <= k <= 2n - 2."""
        return 4 * self.n + (2 * self.n - k)

    def check_ranges(self, t, a=None, b=None) -> None:
        """Assert the block identities of the constructed table.

        Padding blocks hold 4M, T[n+i] = a_{n-i} + shift_a and
        T[3n+i] = b_{n-i} + shift_b (0-based a, b), and T[4n+1] = 4M
        separates the copied operands from the convolution block.
        """
        n, four_m = self.n, 4 * self.M
        t = np.asarray(t)
        if not np.all(t[1 : n + 1] == four_m):
            raise AssertionError("T[1..n] != 4M")
        if not np.all(t[2 * n + 1 : 3 * n + 1] == four_m):
            raise AssertionError("T[2n+1..3n] != 4M")
        if t[4 * n + 1] != four_m:
            raise AssertionError("T[4n+1] != 4M")
        if a is not None and not np.array_equal(t[n + 1 : 2 * n + 1], np.asarray(a)[::-1] + self.shift_a):
            raise AssertionError("T[n+i] != a_{n-i} + shift")
        if b is not None and not np.array_equal(t[3 * n + 1 : 4 * n + 1], np.asarray(b)[::-1] + self.shift_b):
            raise AssertionError("T[3n+i] != b_{n-i} + shift")


def reduce_minplus_to_oicc(a, b, W: Optional[int] = None) -> ReductionArtifact:
    """Encode a * b in the table of one coin change instance of size 6n.

    After shifting so that 2M <= a_i <= 3M and 0 <= b_j <= M (M = 2W + 1),
    the word (4M)^n . reverse(a) . (4M)^n . reverse(b) . (4M)^2n satisfies
    T[n+i] = a_{n-i}, T[3n+i] = b_{n-i} and T[4n+i] = (a * b)_{2n-i}.
    """
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    n = len(a)
    if len(b) != n or n < 1:
        raise ValueError("convolution operands must have equal positive length")
    if np.any((a == INF) | (a == NEG_INF) | (b == INF) | (b == NEG_INF)):
        raise ValueError("convolution operands must be finite")
    bound = max(max_abs_finite(a), max_abs_finite(b))
    W = bound if W is None else W
    if bound > W:
        raise ValueError(f"entry {bound} exceeds bound W={W}")
    M = 2 * W + 1
    if 16 * M * 6 * n > _SAFE:
        raise ArithmeticOverflow("gadget weights overflow int64")
    shift_a = 2 * M + W
    shift_b = W
    filler = np.full(n, 4 * M, dtype=np.int64)
    word = np.concatenate(
        [filler, (a + shift_a)[::-1], filler, (b + shift_b)[::-1], filler, filler]
    )
    gadget = ConvGadget(n=n, M=M, shift_a=shift_a, shift_b=shift_b)

    def extract(t):
        t = np.asarray(t, dtype=np.int64)
        gadget.check_ranges(t, a, b)
        idx = [gadget.table_index(k) for k in range(2 * n - 1)]
        return t[idx] - gadget.shift

    return ReductionArtifact(
        target=CoinChangeInstance(word, W=4 * M),
        extract=extract,
        meta={"gadget": gadget},
    )


def cc_to_unbounded_knapsack(inst: CoinChangeInstance) -> ReductionArtifact:
    """Coin change as unbounded knapsack with profits p_i = i M - w_i.

    M = 2 n W + 1 makes every total-n multiset beat every smaller total,
    so the optimum has total n exactly whenever n is representable.
    """
    n, W = inst.n, inst.W
    M = 2 * n * W + 1
    if (n + 1) * M > _SAFE:
        raise ArithmeticOverflow("knapsack profits overflow int64")
    sizes = np.arange(1, n + 1, dtype=np.int64)
    p = np.where(inst.w == INF, NEG_INF, sizes * M - np.where(inst.w == INF, 0, inst.w))

    def extract(profit: int) -> int:
        profit = int(profit)
        if profit < n * M - n * W:
            return INF
        return n * M - profit

    return ReductionArtifact(
        target=KnapsackInstance(p), extract=extract, meta={"M": M}
    )


def solve_unbounded_knapsack(
    inst: KnapsackInstance,
    oicc: Callable[[CoinChangeInstance], np.ndarray] = solve_oicc,
) -> int:
    """Best profit over multisets of total size <= n; the empty multiset counts."""
    if inst.n < 1:
        raise ValueError("knapsack needs n >= 1")
    w = np.where(inst.p == NEG_INF, INF, -inst.p)
    t = np.asarray(oicc(CoinChangeInstance(w)), dtype=np.int64)
    best = int(t[1:].min())
    return 0 if best == INF else max(0, -best)


def threshold_query(
    q: ThresholdQuery,
    cc_oracle: CCSolver = solve_cc,
    stats: Optional[WorkStats] = None,
) -> Optional[int]:
    """Return some i with T^J[i] <= r~_i (1-based), or None, via one CC call.

    The gadget K has small coins S w~_i at denominations 1..M and, for every
    index i that can still qualify, one big coin at denomination 2M + 1 - i
    of weight S(-C - r~_i) - (i - 1) with S = M and C = (2M + 1) Wmax + 1.
    A total of 2M + 1 uses at most one big coin; paths without one cost at
    least -S (C - 1), while a qualifying i yields a path of cost at most
    -S C - (i - 1).  The residue of T^K[2M+1] modulo S names the index.
    """
    m = len(q.w)
    wmax = max_abs_finite(q.w)
    scale = m
    big_c = (2 * m + 1) * wmax + 1
    reach = m * wmax  # |T^J[i]| <= i * wmax for every finite entry
    if scale * (big_c + 2 * reach + 1) + m > _SAFE:
        raise ArithmeticOverflow("threshold gadget overflows int64")
    word = np.full(2 * m + 1, INF, dtype=np.int64)
    small = q.w != INF
    word[:m][small] = q.w[small] * scale
    for i in range(1, m + 1):
        r = int(q.r[i - 1])
        if r == NEG_INF or r < -reach:
            continue  # cannot qualify: no big coin
        r = min(r, reach)  # +INF and large thresholds: qualifies iff T^J[i] finite
        word[2 * m + 1 - i - 1] = scale * (-big_c - r) - (i - 1)
    if stats is not None:
        stats.oracle_calls += 1
    value = int(cc_oracle(CoinChangeInstance(word)))
    if value == INF or value > -scale * big_c:
        return None
    return (-value) % scale + 1


def _naive_prefix(t: np.ndarray, w: np.ndarray, start: int, stop: int) -> None:
    # fill t[start..stop] in place by the direct recurrence
    wp = np.concatenate([[INF], w])
    for i in range(start, stop + 1):
        t[i] = sat_add(t[i - 1 :: -1][:i], wp[1 : i + 1]).min()


def oicc_via_cc(
    inst: CoinChangeInstance,
    cc_oracle: CCSolver = solve_cc,
    stats: Optional[WorkStats] = None,
    round_log: Optional[list] = None,
) -> np.ndarray:
    """All T[1..n] from a single-target coin change oracle.

    Indices are cut into N = ceil(sqrt n) ranges of width N.  The first two
    ranges are filled directly.  For each later range a parallel binary
    search halves every feasible interval per round: for k = 1..j one
    two-range (min,+)-convolution subproblem is embedded as a coin change
    gadget, and threshold queries with witness deletion report every index
    whose value is at most its current median.  ``round_log`` receives
    (range, threshold calls) per round.
    """
    n = inst.n
    if n < 1:
        raise ValueError("coin change needs n >= 1")
    w = inst.w
    W = inst.W
    big_n = math.ceil(math.sqrt(n))
    t = np.full(n + 1, INF, dtype=np.int64)
    t[0] = 0
    _naive_prefix(t, w, 1, min(n, 2 * big_n))
    bound = n * W  # |T[i]| <= n W for finite entries; bound + 1 encodes INF
    pad = 2 * bound + 1

    def coin(c: int) -> int:
        return int(w[c - 1]) if 1 <= c <= n else INF

    def table(i: int) -> int:
        return int(t[i]) if 0 <= i <= n else INF

    ranges = math.ceil(n / big_n)
    for j in range(3, ranges + 1):
        first = (j - 1) * big_n + 1
        members = list(range(first, min(j * big_n, n) + 1))
        lo = {i: -bound for i in members}
        hi = {i: bound + 1 for i in members}
        while any(lo[i] < hi[i] for i in members):
            r = {i: (lo[i] + hi[i]) // 2 for i in members if lo[i] < hi[i]}
            found = set()
            calls = 0
            for k in range(1, j + 1):
                if k >= 2:
                    av = [coin((k - 1) * big_n + l) if l <= big_n else INF for l in range(1, 2 * big_n + 1)]
                    bv = [table((j - k - 1) * big_n + l) for l in range(1, 2 * big_n + 1)]
                else:
                    av = [table(l) for l in range(1, 2 * big_n + 1)]
                    bv = [table((j - 2) * big_n + l) if l <= big_n else INF for l in range(1, 2 * big_n + 1)]
                av = np.where(np.array(av) == INF, pad, av)
                bv = np.where(np.array(bv) == INF, pad, bv)
                art = reduce_minplus_to_oicc(av, bv)
                gadget: ConvGadget = art.meta["gadget"]
                thresholds = np.full(art.target.n, NEG_INF, dtype=np.int64)
                slot_of = {}
                for l in range(1, big_n + 1):
                    i = first - 1 + l
                    if i in r and i not in found:
                        # 1-based (a*b)_{N+l} is 0-based index N + l - 2
                        pos = gadget.table_index(big_n + l - 2)
                        thresholds[pos - 1] = r[i] + gadget.shift
                        slot_of[pos] = i
                if not slot_of:
                    continue
                while True:
                    calls += 1
                    wit = threshold_query(ThresholdQuery(art.target.w, thresholds), cc_oracle, stats)
                    if wit is None:
                        break
                    found.add(slot_of[wit])
                    thresholds[wit - 1] = NEG_INF
            for i, ri in r.items():
                if i in found:
                    hi[i] = ri
                else:
                    lo[i] = ri + 1
            if round_log is not None:
                round_log.append((j, calls))
        for i in members:
            t[i] = lo[i] if lo[i] <= bound else INF
    return t


def reconstruct_coins(inst: CoinChangeInstance, t, target: int) -> list[int]:
    """Denominations of one optimal multiset for ``target`` read off a solved table."""
    t = np.asarray(t, dtype=np.int64)
    if t[target] == INF:
        raise ValueError("target is not representable")
    coins = []
    j = target
    while j > 0:
        for c in range(1, j + 1):
            wc = int(inst.w[c - 1])
            if wc != INF and t[j - c] != INF and t[j - c] + wc == t[j]:
                coins.append(c)
                j -= c
                break
        else:
            raise AssertionError("table is inconsistent with the instance")
    return coins
