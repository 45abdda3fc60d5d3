"""Low-rank LWS and its inner-product core problems.

The chain of reductions implemented here is

    MinInnProd -> LowRankLWS -> Static-LWS(low rank) -> AllInnProd -> MinInnProd

so that an arbitrary MinInnProd decision procedure (the ``oracle``) can
solve low-rank LWS instances through :func:`lwslab.core.solve_via_static`.
Witness indices are 1-based, matching a_1..a_n / b_1..b_n.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .core import LowRankModel, ReductionArtifact, StaticQuery, WorkStats
from .ext import INF, MAX_FINITE, ArithmeticOverflow, max_abs_finite

# Magnitude ceiling for every constructed coordinate product sum.
_SAFE = MAX_FINITE // 4


@dataclass(frozen=True)
class LowRankInstance:
    """Out-vectors mu_0..mu_{n-1} and in-vectors sigma_1..sigma_n (both n x d)."""

    mu: np.ndarray
    sigma: np.ndarray
    W: Optional[int] = None

    def __post_init__(self):
        mu = np.atleast_2d(np.asarray(self.mu, dtype=np.int64))
        sigma = np.atleast_2d(np.asarray(self.sigma, dtype=np.int64))
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "sigma", sigma)
        bound = max(max_abs_finite(mu), max_abs_finite(sigma))
        if self.W is None:
            object.__setattr__(self, "W", bound)
        elif bound > self.W:
            raise ValueError(f"coordinate {bound} exceeds bound W={self.W}")

    @property
    def n(self) -> int:
        return self.mu.shape[0]

    @property
    def d(self) -> int:
        return self.mu.shape[1]

    def model(self, stats: Optional[WorkStats] = None) -> LowRankModel:
        return LowRankModel(self.mu, self.sigma, stats)


@dataclass(frozen=True)
class InnerProductInstance:
    """Vectors a_1..a_n and b_1..b_m (rows) with threshold r."""

    a: np.ndarray
    b: np.ndarray
    r: int = 0
    W: Optional[int] = None

    def __post_init__(self):
        a = np.asarray(self.a, dtype=np.int64)
        b = np.asarray(self.b, dtype=np.int64)
        if a.ndim == 1:
            a = a[:, None]
        if b.ndim == 1:
            b = b[:, None]
        if a.shape[1] != b.shape[1]:
            raise ValueError("a and b must share the dimension d")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        amax, bmax = max_abs_finite(a), max_abs_finite(b)
        object.__setattr__(self, "_product_bound", a.shape[1] * amax * bmax)
        bound = max(amax, bmax)
        if self.W is None:
            object.__setattr__(self, "W", bound)
        elif bound > self.W:
            raise ValueError(f"coordinate {bound} exceeds bound W={self.W}")

    @property
    def d(self) -> int:
        return self.a.shape[1]

    def product_bound(self) -> int:
        """max |<a_i, b_j>| guaranteed by the data."""
        return self._product_bound

    def with_threshold(self, r: int) -> "InnerProductInstance":
        # same validated vectors, new r: skips re-checking the coordinates
        out = object.__new__(InnerProductInstance)
        out.__dict__.update(self.__dict__)
        object.__setattr__(out, "r", int(r))
        return out


MinInnProdOracle = Callable[[InnerProductInstance], bool]


def _products(inst: InnerProductInstance) -> np.ndarray:
    if inst.product_bound() > _SAFE:
        raise ArithmeticOverflow("inner products may overflow int64")
    return inst.a @ inst.b.T


def mininnprod_naive(inst: InnerProductInstance) -> bool:
    """Is there a pair with <a_i, b_j> <= r?  Theta(n m d)."""
    if len(inst.a) == 0 or len(inst.b) == 0:
        return False
    return bool(_products(inst).min() <= inst.r)


def allinnprod_naive(inst: InnerProductInstance) -> np.ndarray:
    """For each b_j the value min_i <a_i, b_j>."""
    return _products(inst).min(axis=0)


def reduce_mininnprod_to_lowrank(inst: InnerProductInstance) -> ReductionArtifact:
    """Embed a MinInnProd instance in a (2n+1)-place, (d+2)-rank LWS instance.

    Places 1..n carry a_i on their out-vectors, places n+1..2n carry b_j on
    their in-vectors, and the sentinels at 0 and 2n+1 cost (dW)^2, which is
    at least every <a_i, b_j>.  Then T[2n+1] = min_{i,j} <a_i, b_j>.
    """
    a, b = inst.a, inst.b
    n, d = a.shape
    if b.shape[0] != n:
        raise ValueError("the low-rank embedding needs |a| == |b|")
    big = d * inst.W
    if big * big > _SAFE:
        raise ArithmeticOverflow("(dW)^2 overflows int64")
    zeros = np.zeros(d, dtype=np.int64)
    mu = np.zeros((2 * n + 1, d + 2), dtype=np.int64)
    sigma = np.zeros((2 * n + 1, d + 2), dtype=np.int64)
    mu[0] = np.concatenate([[big, 0], zeros])
    for i in range(1, n + 1):
        mu[i] = np.concatenate([[0, big], a[i - 1]])
        # sigma_i stays zero; mu_{n+j} stays zero
        sigma[n + i - 1] = np.concatenate([[big, 0], b[i - 1]])
    sigma[2 * n] = np.concatenate([[big, big], zeros])
    target = LowRankInstance(mu, sigma, W=big)

    def extract(t):
        return bool(int(t[2 * n + 1]) <= inst.r)

    return ReductionArtifact(
        target=target,
        extract=extract,
        meta={"value_index": 2 * n + 1, "dimension": d + 2},
    )


def static_lowrank_to_allinnprod(
    model: LowRankModel,
    q: StaticQuery,
    allinnprod: Callable[[InnerProductInstance], np.ndarray] = allinnprod_naive,
) -> np.ndarray:
    """Answer one static batch with a single AllInnProd call.

    a_i = (mu_i, T[i]) and b_j = (sigma_j, 1) give <a_i, b_j> = T[i] + w(i, j).
    """
    q.check(model)
    if np.any(q.t_in == INF):
        raise ValueError("low-rank tables are always finite")
    rows, cols = q.rows, q.cols
    model.stats.queries += 2 * q.big_n  # one out- and one in-vector per place
    a = np.column_stack([model.mu[rows], q.t_in])
    b = np.column_stack([model.sigma[cols - 1], np.ones(len(cols), dtype=np.int64)])
    return np.asarray(allinnprod(InnerProductInstance(a, b)), dtype=np.int64)


def mininnprod_witness(
    inst: InnerProductInstance,
    oracle: MinInnProdOracle = mininnprod_naive,
    stats: Optional[WorkStats] = None,
) -> Optional[tuple[int, int]]:
    """Find (i, j) with <a_i, b_j> <= r using only a decision oracle.

    Appends the index encoding a'_i = (a_i n, (i-1) n, -1), b'_j = (b_j n, -1, j-1)
    so that <a'_i, b'_j> = <a_i, b_j> n^2 - (i-1) n - (j-1), binary-searches the
    exact minimum of the encoded products and decodes the pair from it.
    Among equal inner products the pair maximising (i-1) n + (j-1) is returned.
    """
    na, nb = len(inst.a), len(inst.b)
    if na == 0 or nb == 0:
        return None
    n = max(na, nb)
    sq = n * n
    bound = inst.product_bound()
    if (bound + abs(inst.r) + 1) * sq > _SAFE:
        raise ArithmeticOverflow("witness encoding overflows int64")
    ia = np.arange(na, dtype=np.int64)
    jb = np.arange(nb, dtype=np.int64)
    a2 = np.column_stack([inst.a * n, ia * n, -np.ones(na, dtype=np.int64)])
    b2 = np.column_stack([inst.b * n, -np.ones(nb, dtype=np.int64), jb])

    encoded = InnerProductInstance(a2, b2)

    def ask(threshold: int) -> bool:
        if stats is not None:
            stats.oracle_calls += 1
        return oracle(encoded.with_threshold(threshold))

    hi = inst.r * sq
    if not ask(hi):
        return None
    lo = -bound * sq - sq  # strictly below every encoded product
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ask(mid):
            hi = mid
        else:
            lo = mid
    value = hi
    p = -((-value) // sq)  # ceil(value / n^2) recovers <a_i, b_j>
    e = p * sq - value
    return int(e // n) + 1, int(e % n) + 1


def allinnprod_via_mininnprod(
    inst: InnerProductInstance,
    oracle: MinInnProdOracle = mininnprod_naive,
    stats: Optional[WorkStats] = None,
    round_log: Optional[list] = None,
) -> np.ndarray:
    """All column minima through a MinInnProd decision oracle.

    Parallel binary search: every b_j keeps a feasible range for its answer
    p_j, initially [-B, B] with B = d max|a| max|b|.  One round halves all
    ranges at once by solving "is <a_i, b_j> <= r_j for some i?" for every j,
    which is done on sqrt-sized groups with repeated witness finding on the
    (d+1)-dimensional vectors (a_i, -1), (b_j, r_j) and deletion of witnessed
    b_j.  ``round_log`` (if given) receives the witness-call count per round.
    """
    a, b = inst.a, inst.b
    na, nb = len(a), len(b)
    if na == 0:
        raise ValueError("AllInnProd needs at least one a-vector")
    bound = inst.product_bound()
    lo = np.full(nb, -bound, dtype=np.int64)
    hi = np.full(nb, bound, dtype=np.int64)
    ga = math.ceil(math.sqrt(na))
    gb = math.ceil(math.sqrt(nb))
    size_a = math.ceil(na / ga)
    size_b = math.ceil(nb / gb)
    groups_a = [np.arange(k * size_a, min(na, (k + 1) * size_a)) for k in range(ga)]
    groups_b = [np.arange(k * size_b, min(nb, (k + 1) * size_b)) for k in range(gb)]
    groups_a = [g for g in groups_a if g.size]
    groups_b = [g for g in groups_b if g.size]
    a_ext = np.column_stack([a, -np.ones(na, dtype=np.int64)])
    while np.any(lo < hi):
        r = (lo + hi) // 2
        active = lo < hi
        hit = np.zeros(nb, dtype=bool)
        calls = 0
        for ga_idx in groups_a:
            for gb_idx in groups_b:
                # a b_j witnessed against an earlier a-group is settled for this round
                remaining = [j for j in gb_idx.tolist() if active[j] and not hit[j]]
                while remaining:
                    sub_b = np.column_stack([b[remaining], r[remaining]])
                    calls += 1
                    if stats is not None:
                        stats.witness_calls += 1
                    wit = mininnprod_witness(
                        InnerProductInstance(a_ext[ga_idx], sub_b, r=0), oracle, stats
                    )
                    if wit is None:
                        break
                    j = remaining.pop(wit[1] - 1)
                    hit[j] = True
        hi = np.where(active & hit, r, hi)
        lo = np.where(active & ~hit, r + 1, lo)
        if round_log is not None:
            round_log.append(calls)
    return lo
