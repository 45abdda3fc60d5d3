"""Textbook reference algorithms used as independent checks.

None of these go through the LWS engine, so agreement with the engine's
answers is evidence rather than a tautology.
"""
from __future__ import annotations

import bisect
import itertools
from typing import Optional, Sequence

import numpy as np

from .ext import INF, NEG_INF


def lis_patience(x: Sequence[int]) -> int:
    """Strict LIS length by patience sorting (O(n log n))."""
    tails: list = []
    for v in x:
        k = bisect.bisect_left(tails, v)
        if k == len(tails):
            tails.append(v)
        else:
            tails[k] = v
    return len(tails)


def lis_dp(x: Sequence[int]) -> int:
    best = [1] * len(x)
    for j in range(len(x)):
        for i in range(j):
            if x[i] < x[j] and best[i] + 1 > best[j]:
                best[j] = best[i] + 1
    return max(best, default=0)


def subset_sum_bitset(n: int, S: Sequence[int]) -> bool:
    """Unbounded subset sum with a big-integer bitset, one word-packed row per step."""
    reach = 1
    elems = sorted(set(S))
    for i in range(1, n + 1):
        if any((reach >> (i - s)) & 1 for s in elems if s <= i):
            reach |= 1 << i
    return bool((reach >> n) & 1)


def unbounded_knapsack_dp(p: Sequence[int]) -> int:
    """Classic O(n^2) table over capacities 0..n; NEG_INF marks a missing item."""
    n = len(p)
    best = [0] * (n + 1)
    for cap in range(1, n + 1):
        b = best[cap - 1]
        for size in range(1, cap + 1):
            ps = int(p[size - 1])
            if ps != NEG_INF:
                b = max(b, best[cap - size] + ps)
        best[cap] = b
    return best[n]


def coin_change_dp(w: Sequence[int], target: Optional[int] = None) -> list:
    """Forward relaxation over Python ints; INF where unreachable."""
    n = len(w) if target is None else target
    t = [INF] * (n + 1)
    t[0] = 0
    for i in range(n + 1):
        if t[i] == INF:
            continue
        for c in range(1, n - i + 1):
            wc = int(w[c - 1]) if c <= len(w) else INF
            if wc != INF and t[i] + wc < t[i + c]:
                t[i + c] = t[i] + wc
    return t


def minplus_bruteforce(a: Sequence[int], b: Sequence[int]) -> list:
    out = [INF] * (len(a) + len(b) - 1)
    for i, j in itertools.product(range(len(a)), range(len(b))):
        if a[i] != INF and b[j] != INF:
            out[i + j] = min(out[i + j], int(a[i]) + int(b[j]))
    return out


def lws_paths(w: np.ndarray) -> list:
    """T[j] by enumerating every increasing path 0 -> j (tiny n only)."""
    n = w.shape[0] - 1
    out = [0]
    for j in range(1, n + 1):
        best = INF
        for k in range(j):
            for mid in itertools.combinations(range(1, j), k):
                path = (0, *mid, j)
                cost = 0
                for u, v in zip(path, path[1:]):
                    if w[u, v] == INF:
                        cost = INF
                        break
                    cost += int(w[u, v])
                best = min(best, cost)
        out.append(best)
    return out
