"""Convolution kernels over int64 costs and boolean vectors."""
from __future__ import annotations

from typing import Callable, Optional

import numpy as np

from .core import WorkStats
from .ext import FAST_LIMIT, INF, fast_ok, from_fast, max_abs_finite, sat_add, to_fast

MinPlusKernel = Callable[..., np.ndarray]

# Counts are bounded by the vector length, so FFT products stay below 2**53.
FFT_GUARD = 1 << 25


def minplus_naive(a, b, stats: Optional[WorkStats] = None) -> np.ndarray:
    """(a * b)_k = min_{i+j=k} a_i + b_j, exact, Theta(|a| |b|) cells."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.size == 0 or b.size == 0:
        raise ValueError("min-plus convolution needs non-empty vectors")
    if a.size > b.size:
        a, b = b, a
    if stats is not None:
        stats.cells += a.size * b.size
    if fast_ok(max_abs_finite(a) + max_abs_finite(b)):
        fa, fb = to_fast(a), to_fast(b)
        out = np.full(a.size + b.size - 1, 2 * FAST_LIMIT, dtype=np.int64)
        for i, ai in enumerate(fa.tolist()):
            if ai < FAST_LIMIT:
                seg = out[i : i + b.size]
                np.minimum(seg, fb + ai, out=seg)
        return from_fast(out)
    out = np.full(a.size + b.size - 1, INF, dtype=np.int64)
    for i, ai in enumerate(a.tolist()):
        if ai == INF:
            continue
        seg = out[i : i + b.size]
        np.minimum(seg, sat_add(ai, b), out=seg)
    return out


def shift(a, c: int) -> np.ndarray:
    """Add a finite constant to every finite entry; INF stays INF."""
    a = np.asarray(a, dtype=np.int64)
    return sat_add(a, np.int64(c))


def _conv_fft(x: np.ndarray, s: np.ndarray) -> np.ndarray:
    size = x.size + s.size - 1
    nfft = 1 << (size - 1).bit_length()
    fx = np.fft.rfft(x.astype(np.float64), nfft)
    fs = np.fft.rfft(s.astype(np.float64), nfft)
    return np.rint(np.fft.irfft(fx * fs, nfft)[:size]).astype(np.int64)


def _conv_packed(x: np.ndarray, s: np.ndarray) -> np.ndarray:
    # Kronecker substitution: one byte-aligned slot per entry, wide enough
    # for any count, so a single exact big-integer product does the work.
    size = x.size + s.size - 1
    width = (min(x.size, s.size).bit_length() + 8) // 8

    def pack(v: np.ndarray) -> int:
        buf = np.zeros((v.size, width), dtype=np.uint8)
        buf[:, 0] = v
        return int.from_bytes(buf.tobytes(), "little")

    prod = pack(x) * pack(s)
    raw = np.frombuffer(prod.to_bytes(size * width, "little"), dtype=np.uint8)
    raw = raw.reshape(size, width).astype(np.int64)
    weights = np.int64(1) << (8 * np.arange(width, dtype=np.int64))
    return raw @ weights


def conv_boolean(x, s, stats: Optional[WorkStats] = None, method: str = "auto") -> np.ndarray:
    """Counts r_k = #{(i, j): i + j = k, x_i and s_j}.

    ``method`` is ``"fft"``, ``"packed"`` (exact big-integer product) or
    ``"auto"``, which uses the FFT below ``FFT_GUARD`` and the exact path above.
    """
    x = np.asarray(x, dtype=bool)
    s = np.asarray(s, dtype=bool)
    if x.size == 0 or s.size == 0:
        raise ValueError("boolean convolution needs non-empty vectors")
    if stats is not None:
        stats.cells += x.size + s.size
    if method == "auto":
        method = "fft" if max(x.size, s.size) <= FFT_GUARD else "packed"
    if method == "fft":
        return _conv_fft(x, s)
    if method == "packed":
        return _conv_packed(x, s)
    raise ValueError(f"unknown method {method!r}")
