"""The LWS recurrence T[j] = min_{i<j} T[i] + w(i, j) and its generic solvers.

Tables are int64 numpy arrays of length n + 1 with ``T[0] == 0``; ``INF``
from :mod:`lwslab.ext` marks unreachable indices.  Weight models count every
weight they hand out in ``model.stats.queries`` so that solvers can be
compared by work rather than wall time.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Protocol

import numpy as np

from .ext import (
    FAST_INF,
    FAST_LIMIT,
    INF,
    MAX_FINITE,
    ArithmeticOverflow,
    fast_ok,
    from_fast,
    max_abs_finite,
    sat_add,
    to_fast,
)


@dataclass
class WorkStats:
    """Machine-independent work counters."""

    queries: int = 0
    oracle_calls: int = 0
    witness_calls: int = 0
    cells: int = 0
    static_calls: int = 0
    static_width: int = 0

    def reset(self) -> None:
        for name in self.__dataclass_fields__:
            setattr(self, name, 0)

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in self.__dataclass_fields__}


class WeightModel:
    """Read-only view of the weights w(i, j), 0 <= i < j <= n.

    Subclasses implement ``_block(rows, cols)`` returning the matrix of
    weights for index arrays; entries with ``i >= j`` are never requested.
    """

    n: int

    def __init__(self, n: int, stats: Optional[WorkStats] = None):
        if n < 0:
            raise ValueError("n must be non-negative")
        self.n = int(n)
        self.stats = stats if stats is not None else WorkStats()

    def _block(self, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def weight_bound(self) -> Optional[int]:
        """An upper bound on |w(i, j)| over finite weights, if cheaply known."""
        return None

    def query(self, i: int, j: int) -> int:
        if not 0 <= i < j <= self.n:
            raise IndexError(f"weight ({i}, {j}) outside 0 <= i < j <= {self.n}")
        self.stats.queries += 1
        return int(self._block(np.array([i]), np.array([j]))[0, 0])

    def block(self, rows, cols) -> np.ndarray:
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        self.stats.queries += rows.size * cols.size
        return np.asarray(self._block(rows, cols), dtype=np.int64)

    def column(self, j: int, lo: int = 0, hi: Optional[int] = None) -> np.ndarray:
        """Weights w(i, j) for lo <= i < hi (default hi = j)."""
        hi = j if hi is None else hi
        return self.block(np.arange(lo, hi), np.array([j]))[:, 0]


class ExplicitModel(WeightModel):
    """Weights stored as a dense (n+1) x (n+1) matrix; only i < j is read."""

    def __init__(self, matrix, stats=None):
        m = np.asarray(matrix, dtype=np.int64)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("explicit weights must be a square matrix")
        super().__init__(m.shape[0] - 1, stats)
        self.matrix = m
        self.matrix.setflags(write=False)
        self._bound = max_abs_finite(m)

    def weight_bound(self):
        return self._bound

    def _block(self, rows, cols):
        return self.matrix[np.ix_(rows, cols)]


class ToeplitzModel(WeightModel):
    """w(i, j) = w[j - i], given as w_1..w_n (``coins[k-1]`` is w_k)."""

    def __init__(self, coins, stats=None):
        c = np.asarray(coins, dtype=np.int64)
        super().__init__(len(c), stats)
        self.coins = c
        self.coins.setflags(write=False)
        # w_k for k beyond n is never part of an instance; pad as absent
        self._padded = np.concatenate([[INF], c, np.full(max(len(c), 1), INF)])
        self._bound = max_abs_finite(c)

    def weight_bound(self):
        return self._bound

    def _block(self, rows, cols):
        d = cols[None, :] - rows[:, None]
        return self._padded[np.clip(d, 0, len(self._padded) - 1)]

    def column(self, j: int, lo: int = 0, hi: Optional[int] = None) -> np.ndarray:
        hi = j if hi is None else hi
        self.stats.queries += hi - lo
        return self._padded[j - hi + 1 : j - lo + 1][::-1]

    def coin_range(self, lo: int, hi: int) -> np.ndarray:
        """w_lo..w_hi inclusive, INF past n; counts hi - lo + 1 queries."""
        self.stats.queries += hi - lo + 1
        idx = np.arange(lo, hi + 1)
        out = np.full(len(idx), INF, dtype=np.int64)
        ok = (idx >= 1) & (idx <= self.n)
        out[ok] = self.coins[idx[ok] - 1]
        return out


class LowRankModel(WeightModel):
    """w(i, j) = <mu_i, sigma_j> for out-vectors mu_0..mu_{n-1}, in-vectors sigma_1..sigma_n."""

    def __init__(self, mu, sigma, stats=None):
        mu = np.asarray(mu, dtype=np.int64)
        sigma = np.asarray(sigma, dtype=np.int64)
        if mu.shape != sigma.shape or mu.ndim != 2:
            raise ValueError("mu and sigma must both be n x d")
        super().__init__(mu.shape[0], stats)
        d = mu.shape[1]
        if d * max_abs_finite(mu) * max_abs_finite(sigma) > MAX_FINITE // 4:
            raise ArithmeticOverflow("low-rank inner products may overflow int64")
        self.mu, self.sigma = mu, sigma
        self._bound = d * max_abs_finite(mu) * max_abs_finite(sigma)

    def weight_bound(self):
        return self._bound

    def _block(self, rows, cols):
        # sigma is stored 0-based for indices 1..n
        return self.mu[rows] @ self.sigma[cols - 1].T


class FunctionModel(WeightModel):
    """Weights from a vectorised callable ``fn(i, j)`` over broadcast int arrays."""

    def __init__(self, n: int, fn: Callable[[np.ndarray, np.ndarray], np.ndarray], stats=None, bound=None):
        super().__init__(n, stats)
        self.fn = fn
        self._bound = bound

    def weight_bound(self):
        return self._bound

    def _block(self, rows, cols):
        out = self.fn(rows[:, None], cols[None, :])
        return np.broadcast_to(np.asarray(out, dtype=np.int64), (len(rows), len(cols)))


@dataclass(frozen=True)
class StaticQuery:
    """One Static-LWS batch: I = {a+1..a+N}, J = {a+N+1..a+2N}, T on I given."""

    a: int
    big_n: int
    t_in: np.ndarray = field(repr=False)

    def __post_init__(self):
        t = np.asarray(self.t_in, dtype=np.int64)
        object.__setattr__(self, "t_in", t)
        if self.big_n < 1 or len(t) != self.big_n:
            raise ValueError("t_in must hold exactly N values")

    @property
    def rows(self) -> np.ndarray:
        return np.arange(self.a + 1, self.a + self.big_n + 1)

    @property
    def cols(self) -> np.ndarray:
        return np.arange(self.a + self.big_n + 1, self.a + 2 * self.big_n + 1)

    def check(self, model: WeightModel) -> None:
        if self.a < 0 or self.a + 2 * self.big_n > model.n:
            raise ValueError(f"static query {self.a}+2*{self.big_n} exceeds n={model.n}")


class StaticSolver(Protocol):
    def __call__(self, model: WeightModel, q: StaticQuery) -> np.ndarray: ...


def _fast_bound(model: WeightModel) -> bool:
    b = model.weight_bound()
    return b is not None and fast_ok((model.n + 1) * b)


def solve_naive(model: WeightModel) -> np.ndarray:
    """Evaluate the recurrence directly: Theta(n^2) weight queries."""
    n = model.n
    if _fast_bound(model):
        # every finite T entry is bounded by n * max|w|, so no checks needed
        t = np.full(n + 1, FAST_INF, dtype=np.int64)
        t[0] = 0
        for j in range(1, n + 1):
            v = (t[:j] + to_fast(model.column(j))).min()
            t[j] = v if v < FAST_LIMIT else FAST_INF
        return from_fast(t)
    t = np.full(n + 1, INF, dtype=np.int64)
    t[0] = 0
    for j in range(1, n + 1):
        t[j] = sat_add(t[:j], model.column(j)).min()
    return t


def solve_static_naive(model: WeightModel, q: StaticQuery) -> np.ndarray:
    """T'[j] = min_{i in I} T[i] + w(i, j) by a full N x N block."""
    q.check(model)
    block = model.block(q.rows, q.cols)
    return sat_add(q.t_in[:, None], block).min(axis=0)


def solve_via_static(
    model: WeightModel,
    static_solver: StaticSolver = solve_static_naive,
    trace: Optional[Callable[[int, int, np.ndarray], None]] = None,
) -> np.ndarray:
    """Solve LWS with O(n log n) cells of static batches (divide and conquer).

    ``S(i..j, t)`` receives t_k = min_{k' < i} T[k'] + w(k', k); it solves
    the left half recursively, pushes the left half into the right half with
    one static query, recurses right, and closes an odd-length interval with
    a direct scan of its last index.  ``trace(i, j, t)`` is called on entry
    to every recursive call.
    """
    n = model.n
    t_out = np.full(n + 1, INF, dtype=np.int64)
    t_out[0] = 0
    if n == 0:
        return t_out
    stats = model.stats

    def rec(i: int, j: int, t: np.ndarray) -> None:
        if trace is not None:
            trace(i, j, t)
        if i == j:
            t_out[i] = t[0]
            return
        m = math.ceil((j - i) / 2)
        rec(i, i + m - 1, t[:m])
        q = StaticQuery(a=i - 1, big_n=m, t_in=t_out[i : i + m].copy())
        stats.static_calls += 1
        stats.static_width += m
        t_prime = np.asarray(static_solver(model, q), dtype=np.int64)
        if t_prime.shape != (m,):
            raise ValueError("static solver returned the wrong number of values")
        rec(i + m, i + 2 * m - 1, np.minimum(t[m : 2 * m], t_prime))
        if j == i + 2 * m:
            scan = sat_add(t_out[i:j], model.column(j, i, j)).min()
            t_out[j] = min(int(t[-1]), int(scan))

    rec(1, n, model.block(np.array([0]), np.arange(1, n + 1))[0])
    return t_out


def check_table(model: WeightModel, t) -> bool:
    """True iff ``t`` satisfies the recurrence at every index (O(n^2))."""
    t = np.asarray(t, dtype=np.int64)
    if t.shape != (model.n + 1,) or t[0] != 0:
        return False
    for j in range(1, model.n + 1):
        if t[j] != sat_add(t[:j], model.column(j)).min():
            return False
    return True


@dataclass(frozen=True)
class ReductionArtifact:
    """A constructed target instance plus the map that reads the source answer back."""

    target: object
    extract: Callable
    meta: dict = field(default_factory=dict)
