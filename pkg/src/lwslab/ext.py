"""Integers extended with +inf / -inf, stored in int64 with sentinel values.

Every cost in the package is an int64.  ``INF`` and ``NEG_INF`` are the two
extreme int64 values; everything strictly between them is finite.  Addition
saturates at ``INF`` and raises :class:`ArithmeticOverflow` when two finite
values would leave the finite range, rather than wrapping around.
"""
from __future__ import annotations

import math
from typing import Iterable

import numpy as np

INF = int(np.iinfo(np.int64).max)
NEG_INF = int(np.iinfo(np.int64).min)
MAX_FINITE = INF - 1
MIN_FINITE = NEG_INF + 1


class ArithmeticOverflow(ArithmeticError):
    """A finite + finite sum left the 64-bit range."""


def is_finite(x: int) -> bool:
    return NEG_INF < x < INF


def add(x: int, y: int) -> int:
    """Saturating scalar addition."""
    x, y = int(x), int(y)
    if x == INF or y == INF:
        if x == NEG_INF or y == NEG_INF:
            raise ValueError("inf + -inf is undefined")
        return INF
    if x == NEG_INF or y == NEG_INF:
        return NEG_INF
    s = x + y
    if not MIN_FINITE <= s <= MAX_FINITE:
        raise ArithmeticOverflow(f"{x} + {y} overflows int64")
    return s


def sat_add(a, b) -> np.ndarray:
    """Elementwise saturating addition of broadcastable int64 arrays.

    Operands may hold ``INF`` but not ``NEG_INF``.
    """
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    s = a + b  # int64 array arithmetic wraps silently
    inf = (a == INF) | (b == INF)
    # sign-based wraparound test; only meaningful where both are finite
    bad = ((a ^ s) & (b ^ s)) < 0
    bad |= s == INF
    bad |= s == NEG_INF
    bad &= ~inf
    if bad.any():
        raise ArithmeticOverflow("finite sum overflows int64")
    if inf.any():
        if s.ndim == 0:
            return np.int64(INF)
        s[inf] = INF
    return s


# Unchecked fast path: when every finite magnitude that can arise stays
# below FAST_LIMIT, INF is carried as FAST_INF and sums need no checks.
FAST_LIMIT = 1 << 59
FAST_INF = 1 << 61


def fast_ok(bound: int) -> bool:
    return 0 <= bound < FAST_LIMIT


def to_fast(a) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    return np.where(a == INF, FAST_INF, a)


def from_fast(a) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    return np.where(a >= FAST_LIMIT, INF, a)


def as_ext_array(values: Iterable) -> np.ndarray:
    """Convert a sequence of ints / ``math.inf`` / ``"inf"`` strings to int64."""
    out = []
    for v in values:
        out.append(parse_scalar(v))
    return np.array(out, dtype=np.int64)


def parse_scalar(v) -> int:
    if isinstance(v, str):
        s = v.strip().lower()
        if s in ("inf", "+inf"):
            return INF
        if s == "-inf":
            return NEG_INF
        return int(s)
    if isinstance(v, float):
        if math.isinf(v):
            return INF if v > 0 else NEG_INF
        if not v.is_integer():
            raise ValueError(f"non-integer cost {v}")
        return int(v)
    v = int(v)
    if not NEG_INF <= v <= INF:
        raise ArithmeticOverflow(f"{v} does not fit int64")
    return v


def format_scalar(v: int):
    """JSON-friendly form: ints stay ints, infinities become strings."""
    v = int(v)
    if v == INF:
        return "inf"
    if v == NEG_INF:
        return "-inf"
    return v


def format_array(a) -> list:
    return [format_scalar(v) for v in np.asarray(a).tolist()]


def max_abs_finite(a) -> int:
    """Largest |x| over finite entries (0 when there are none)."""
    a = np.asarray(a, dtype=np.int64)
    if a.size == 0:
        return 0
    lo, hi = int(a.min()), int(a.max())
    if lo != NEG_INF and hi != INF:
        return max(-lo, hi)
    fin = a[(a != INF) & (a != NEG_INF)]
    if fin.size == 0:
        return 0
    return int(max(abs(int(fin.min())), abs(int(fin.max()))))
