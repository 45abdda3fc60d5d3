"""Near-linear LWS specializations: each static batch collapses to a cheap
core problem (sorting, one boolean convolution, or SMAWK)."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .core import (
    FunctionModel,
    StaticQuery,
    ToeplitzModel,
    WeightModel,
    WorkStats,
    solve_naive,
    solve_via_static,
)
from .ext import INF, add
from .minplus import conv_boolean


# ---------------------------------------------------------------- LIS


@dataclass(frozen=True)
class LisInstance:
    x: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.int64)
        if x.ndim != 1 or len(x) < 1:
            raise ValueError("LIS needs a non-empty integer sequence")
        object.__setattr__(self, "x", x)

    @property
    def n(self) -> int:
        return len(self.x)

    def model(self, stats: Optional[WorkStats] = None) -> "LisModel":
        return LisModel(self.x, stats)


class LisModel(WeightModel):
    """w(i, j) = -1 if x_i < x_j else INF, with x_0 below every element."""

    def __init__(self, x, stats=None):
        super().__init__(len(x), stats)
        self.values = np.concatenate([[int(np.min(x)) - 1], x])

    def weight_bound(self):
        return 1

    def _block(self, rows, cols):
        return np.where(self.values[rows][:, None] < self.values[cols][None, :], -1, INF)


def static_lis_sorted(model: LisModel, q: StaticQuery) -> np.ndarray:
    """T'[j] = -1 + min{T[i] : x_i < x_j}: sort both sides, one merged pass."""
    q.check(model)
    model.stats.queries += 2 * q.big_n  # every item value is read once
    xa = model.values[q.rows]
    xb = model.values[q.cols]
    ia = np.argsort(xa, kind="stable")
    jb = np.argsort(xb, kind="stable")
    out = np.full(q.big_n, INF, dtype=np.int64)
    best = INF
    p = 0
    for j in jb.tolist():
        while p < q.big_n and xa[ia[p]] < xb[j]:
            best = min(best, int(q.t_in[ia[p]]))
            p += 1
        if best != INF:
            out[j] = best - 1
    return out


def lis_table(inst: LisInstance, stats: Optional[WorkStats] = None) -> np.ndarray:
    return solve_via_static(inst.model(stats), static_lis_sorted)


def lis_length(inst: LisInstance, stats: Optional[WorkStats] = None) -> int:
    """Length of the longest strictly increasing subsequence."""
    return -int(lis_table(inst, stats)[1:].min())


def lis_quadratic(inst: LisInstance, stats: Optional[WorkStats] = None) -> int:
    return -int(solve_naive(inst.model(stats))[1:].min())


# ---------------------------------------------------------- subset sum


@dataclass(frozen=True)
class SubsetSumInstance:
    n: int
    S: tuple

    def __post_init__(self):
        s = tuple(sorted(set(int(v) for v in self.S)))
        if self.n < 1 or any(not 1 <= v <= self.n for v in s):
            raise ValueError("S must be a subset of 1..n")
        object.__setattr__(self, "S", s)

    def model(self, stats: Optional[WorkStats] = None) -> ToeplitzModel:
        w = np.full(self.n, INF, dtype=np.int64)
        w[np.array(self.S, dtype=np.int64) - 1] = 0
        return ToeplitzModel(w, stats)


def static_uss_conv(model: ToeplitzModel, q: StaticQuery) -> np.ndarray:
    """One static subset-sum batch as a single boolean convolution."""
    q.check(model)
    big_n = q.big_n
    x = q.t_in == 0
    s = model.coin_range(1, 2 * big_n) == 0
    r = conv_boolean(x, s, stats=model.stats)
    # 1-based r_{N+j} sits at 0-based index N + j - 2
    hit = r[big_n - 1 : 2 * big_n - 1] > 0
    return np.where(hit, 0, INF)


def unbounded_subset_sum(inst: SubsetSumInstance, stats: Optional[WorkStats] = None) -> bool:
    """Can n be written as a sum of elements of S (repetition allowed)?"""
    return int(solve_via_static(inst.model(stats), static_uss_conv)[inst.n]) == 0


def subset_sum_quadratic(inst: SubsetSumInstance, stats: Optional[WorkStats] = None) -> bool:
    return int(solve_naive(inst.model(stats))[inst.n]) == 0


# ---------------------------------------------------------------- SMAWK


@dataclass(frozen=True)
class MonotoneMatrixView:
    rows: int
    cols: int
    entry: Callable[[int, int], int]


def smawk_col_minima(m: MonotoneMatrixView) -> list[int]:
    """Row index of each column's minimum (topmost on ties) in O(rows + cols) entries.

    Requires total monotonicity: for i < i', j < j',
    m[i, j] > m[i', j] implies m[i, j'] > m[i', j'].
    """
    if m.cols == 0:
        return []
    result = _smawk(list(range(m.rows)), list(range(m.cols)), m.entry)
    return [result[c] for c in range(m.cols)]


def _smawk(rows: list, cols: list, entry) -> dict:
    if not cols:
        return {}
    # reduce: keep at most len(cols) candidate rows
    stack: list = []
    for r in rows:
        while stack and entry(stack[-1], cols[len(stack) - 1]) > entry(r, cols[len(stack) - 1]):
            stack.pop()
        if len(stack) < len(cols):
            stack.append(r)
    rows = stack
    minima = _smawk(rows, cols[1::2], entry)
    # interpolate the even columns between their odd neighbours
    k = 0
    for c in range(0, len(cols), 2):
        col = cols[c]
        last = rows[-1] if c == len(cols) - 1 else minima[cols[c + 1]]
        best_row, best_val = rows[k], entry(rows[k], col)
        while rows[k] != last:
            k += 1
            v = entry(rows[k], col)
            if v < best_val:
                best_row, best_val = rows[k], v
        minima[col] = best_row
    return minima


def check_total_monotonicity(m: MonotoneMatrixView) -> bool:
    """Brute-force check of the definition over all 2 x 2 submatrices."""
    vals = [[m.entry(i, j) for j in range(m.cols)] for i in range(m.rows)]
    for i, i2 in itertools.combinations(range(m.rows), 2):
        for j, j2 in itertools.combinations(range(m.cols), 2):
            if vals[i][j] > vals[i2][j] and not vals[i][j2] > vals[i2][j2]:
                return False
    return True


# -------------------------------------------------------- concave LWS


@dataclass(frozen=True)
class ConcaveInstance:
    """Oracle weights w(i, j) for 0 <= i < j <= n; ``fn`` is vectorised."""

    n: int
    fn: Callable[[np.ndarray, np.ndarray], np.ndarray]
    bound: Optional[int] = None

    def model(self, stats: Optional[WorkStats] = None) -> FunctionModel:
        return FunctionModel(self.n, self.fn, stats, bound=self.bound)

    def w(self, i: int, j: int) -> int:
        return int(self.fn(np.int64(i), np.int64(j)))


def refuel_instance(positions: Sequence[int], k: int) -> ConcaveInstance:
    """w(i, j) = (x_j - x_i - k)^2 over sorted positions x_0..x_n."""
    x = np.sort(np.asarray(positions, dtype=np.int64))
    span = int(x[-1] - x[0]) + abs(k)

    def fn(i, j):
        d = x[j] - x[i] - k
        return d * d

    return ConcaveInstance(len(x) - 1, fn, bound=span * span)


def static_concave_smawk(model: WeightModel, q: StaticQuery) -> np.ndarray:
    """Column minima of m[i, j] = T[i] + w(i, j) over I x J via SMAWK."""
    q.check(model)
    base_i, base_j = q.a + 1, q.a + q.big_n + 1
    t = q.t_in.tolist()

    def entry(r: int, c: int) -> int:
        return add(t[r], model.query(base_i + r, base_j + c))

    view = MonotoneMatrixView(q.big_n, q.big_n, entry)
    rows = smawk_col_minima(view)
    return np.array([entry(r, c) for c, r in enumerate(rows)], dtype=np.int64)


def concave_lws(inst: ConcaveInstance, stats: Optional[WorkStats] = None) -> np.ndarray:
    """Full table of a concave (quadrangle) instance in O(n log n) weight queries."""
    return solve_via_static(inst.model(stats), static_concave_smawk)


def check_quadrangle(inst: ConcaveInstance, exhaustive: bool = False) -> bool:
    """w(i,j) + w(i',j') <= w(i',j) + w(i,j') wherever all four are defined.

    The default checks adjacent quadruples (i, i+1, j, j+1), which sum to
    every larger one; ``exhaustive`` checks all quadruples directly.
    """
    n = inst.n
    if n < 3:
        return True
    idx = np.arange(n + 1)
    w = np.asarray(inst.fn(idx[:, None], idx[None, :]), dtype=object)
    if not exhaustive:
        for i in range(n - 2):
            for j in range(i + 2, n):
                if w[i, j] + w[i + 1, j + 1] > w[i + 1, j] + w[i, j + 1]:
                    return False
        return True
    for i in range(n + 1):
        for i2 in range(i, n + 1):
            for j in range(i2 + 1, n + 1):
                for j2 in range(j, n + 1):
                    if w[i, j] + w[i2, j2] > w[i2, j] + w[i, j2]:
                        return False
    return True
