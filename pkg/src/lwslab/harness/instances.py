"""Flat-file instances: JSON with "inf"/"-inf" literals, seeded generators."""
from __future__ import annotations

import json
import zlib
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from ..chains import RELATIONS, ChainInstance, SelectionInstance, sets_to_vectors
from ..coinchange import CoinChangeInstance, KnapsackInstance
from ..core import ExplicitModel
from ..ext import INF, NEG_INF, as_ext_array, format_array, parse_scalar
from ..lowrank import InnerProductInstance, LowRankInstance
from ..nearlinear import LisInstance, SubsetSumInstance, refuel_instance

FORMAT = "lwslab-instance/1"

KINDS = (
    "explicit",
    "lowrank",
    "toeplitz",
    "knapsack",
    "chain-boxes",
    "chain-sets",
    "lis",
    "uss",
    "concave-refuel",
    # core problems on the other side of the reductions
    "minplus",
    "mininnprod",
    "selection",
)

_MASK64 = (1 << 64) - 1


@dataclass
class InstanceFile:
    kind: str
    n: int
    params: dict = field(default_factory=dict)
    payload: dict = field(default_factory=dict)
    seed: Optional[int] = None
    meta: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "format": FORMAT,
            "kind": self.kind,
            "n": self.n,
            "seed": self.seed,
            "params": self.params,
            "payload": self.payload,
        }
        if self.meta:
            out["meta"] = self.meta
        return out

    def instance_id(self) -> str:
        body = {k: v for k, v in self.to_json().items() if k != "meta"}
        return digest(body)


class UsageError(ValueError):
    """Bad kind, solver, parameter or file contents."""


def digest(obj: Any) -> str:
    """Stable 16-hex-digit fingerprint of a JSON-able value."""
    text = json.dumps(obj, sort_keys=True, separators=(",", ":"))
    return f"{zlib.crc32(text.encode()):08x}{zlib.adler32(text.encode()):08x}"


def serialize(inst: InstanceFile) -> str:
    return json.dumps(inst.to_json(), sort_keys=True, indent=1) + "\n"


def parse(text: str) -> InstanceFile:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"not an instance file: {exc}") from exc
    if obj.get("format") != FORMAT:
        raise UsageError(f"unknown instance format {obj.get('format')!r}")
    if obj.get("kind") not in KINDS:
        raise UsageError(f"unknown kind {obj.get('kind')!r}")
    return InstanceFile(
        kind=obj["kind"],
        n=int(obj["n"]),
        params=dict(obj.get("params", {})),
        payload=dict(obj.get("payload", {})),
        seed=obj.get("seed"),
        meta=dict(obj.get("meta", {})),
    )


def save(inst: InstanceFile, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(inst))


def load(path) -> InstanceFile:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


# ---------------------------------------------------------------- generators

_DEFAULTS = {
    "explicit": {"W": 50, "p_inf": 0.1},
    "lowrank": {"d": 3, "W": 5},
    "toeplitz": {"W": 10, "p_inf": 0.1, "nonneg": 0},
    "knapsack": {"W": 10, "p_absent": 0.1},
    "chain-boxes": {"relation": "domination", "d": 3, "W": 8, "wmax": 5},
    "chain-sets": {"universe": 10, "wmax": 5},
    "lis": {"W": 0},
    "uss": {"k": 0, "min_elem": 1},
    "concave-refuel": {"gap": 10, "k": 0},
    "minplus": {"W": 20},
    "mininnprod": {"d": 3, "W": 5},
    "selection": {"relation": "domination", "d": 3, "W": 6},
}


def _rng(kind: str, n: int, seed: int) -> np.random.Generator:
    return np.random.default_rng([int(seed) & _MASK64, zlib.crc32(kind.encode()), n])


def _merge(kind: str, params: dict) -> dict:
    if kind not in _DEFAULTS:
        raise UsageError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
    merged = dict(_DEFAULTS[kind])
    for key, value in params.items():
        if key not in merged:
            raise UsageError(f"{kind} takes no parameter {key!r}")
        try:
            merged[key] = type(merged[key])(value)
        except ValueError as exc:
            raise UsageError(f"bad value for {kind} parameter {key}: {value!r}") from exc
    return merged


def _ints(rng, lo: int, hi: int, size) -> np.ndarray:
    return rng.integers(lo, hi + 1, size=size, dtype=np.int64)


def _with_inf(rng, values: np.ndarray, p: float) -> np.ndarray:
    return np.where(rng.random(values.shape) < p, INF, values)


def generate(kind: str, n: int, seed: int, **params) -> InstanceFile:
    """Deterministic pseudo-random instance of size n."""
    if n < 1:
        raise UsageError("n must be at least 1")
    p = _merge(kind, params)
    rng = _rng(kind, n, seed)
    payload = _GENERATORS[kind](rng, n, p)
    return InstanceFile(kind=kind, n=n, params=p, payload=payload, seed=int(seed))


def _gen_explicit(rng, n, p):
    w = _with_inf(rng, _ints(rng, -p["W"], p["W"], (n + 1, n + 1)), p["p_inf"])
    w[np.tril_indices(n + 1)] = INF
    return {"w": [format_array(row) for row in w]}


def _gen_lowrank(rng, n, p):
    return {
        "mu": _ints(rng, -p["W"], p["W"], (n, p["d"])).tolist(),
        "sigma": _ints(rng, -p["W"], p["W"], (n, p["d"])).tolist(),
    }


def _gen_toeplitz(rng, n, p):
    lo = 0 if p["nonneg"] else -p["W"]
    return {"w": format_array(_with_inf(rng, _ints(rng, lo, p["W"], n), p["p_inf"]))}


def _gen_knapsack(rng, n, p):
    profits = _ints(rng, 0, p["W"], n)
    return {"p": format_array(np.where(rng.random(n) < p["p_absent"], NEG_INF, profits))}


def _chain_weights(rng, n, wmax):
    return _ints(rng, -wmax, wmax, n - 1).tolist()


def _gen_chain_boxes(rng, n, p):
    inner = _ints(rng, 0, p["W"], (n - 1, p["d"]))
    inner = inner[np.argsort(inner.sum(axis=1), kind="stable")]
    items = np.vstack([np.zeros((1, p["d"]), dtype=np.int64), inner, np.full((1, p["d"]), p["W"] + 1)])
    return {"items": items.tolist(), "weights": _chain_weights(rng, n, p["wmax"])}


def _gen_chain_sets(rng, n, p):
    u = p["universe"]
    sets = [sorted(int(e) + 1 for e in np.flatnonzero(rng.random(u) < 0.5)) for _ in range(n - 1)]
    sets.sort(key=len)
    return {"sets": [[]] + sets + [list(range(1, u + 1))], "weights": _chain_weights(rng, n, p["wmax"])}


def _gen_lis(rng, n, p):
    return {"x": _ints(rng, 0, (p["W"] or n) - 1, n).tolist()}


def _gen_uss(rng, n, p):
    lo = min(max(1, p["min_elem"]), n)
    k = p["k"] or max(1, int(np.log2(n + 1)))
    k = min(k, n - lo + 1)
    return {"S": sorted(int(v) for v in rng.choice(np.arange(lo, n + 1), size=k, replace=False))}


def _gen_refuel(rng, n, p):
    x = np.concatenate([[0], np.cumsum(_ints(rng, 1, p["gap"], n))])
    return {"x": x.tolist(), "k": p["k"] or 3 * p["gap"]}


def _gen_minplus(rng, n, p):
    return {"a": _ints(rng, -p["W"], p["W"], n).tolist(), "b": _ints(rng, -p["W"], p["W"], n).tolist()}


def _gen_mininnprod(rng, n, p):
    bound = p["d"] * p["W"] * p["W"]
    return {
        "a": _ints(rng, -p["W"], p["W"], (n, p["d"])).tolist(),
        "b": _ints(rng, -p["W"], p["W"], (n, p["d"])).tolist(),
        "r": int(_ints(rng, -bound // 2, bound // 4, 1)[0]),
    }


def _gen_selection(rng, n, p):
    rel = p["relation"]
    if rel not in RELATIONS:
        raise UsageError(f"unknown relation {rel!r}")
    hi = 1 if rel in ("containment", "orthogonal") else p["W"]
    d = 1 if rel == "less" else p["d"]
    return {"a": _ints(rng, 0, hi, (n, d)).tolist(), "b": _ints(rng, 0, hi, (n, d)).tolist()}


_GENERATORS = {
    "explicit": _gen_explicit,
    "lowrank": _gen_lowrank,
    "toeplitz": _gen_toeplitz,
    "knapsack": _gen_knapsack,
    "chain-boxes": _gen_chain_boxes,
    "chain-sets": _gen_chain_sets,
    "lis": _gen_lis,
    "uss": _gen_uss,
    "concave-refuel": _gen_refuel,
    "minplus": _gen_minplus,
    "mininnprod": _gen_mininnprod,
    "selection": _gen_selection,
}


# ---------------------------------------------------------------- decoding


def to_domain(inst: InstanceFile):
    """Build the library object an instance file describes."""
    p, data = inst.params, inst.payload
    try:
        kind = inst.kind
        if kind == "explicit":
            return ExplicitModel(np.vstack([as_ext_array(row) for row in data["w"]]))
        if kind == "lowrank":
            return LowRankInstance(np.array(data["mu"]), np.array(data["sigma"]), W=p.get("W"))
        if kind == "toeplitz":
            return CoinChangeInstance(as_ext_array(data["w"]))
        if kind == "knapsack":
            return KnapsackInstance(as_ext_array(data["p"]))
        if kind == "chain-boxes":
            rel = RELATIONS[p.get("relation", "domination")]
            return ChainInstance(np.array(data["items"]), np.array(data["weights"]), rel)
        if kind == "chain-sets":
            items = sets_to_vectors(data["sets"], int(p["universe"]))
            return ChainInstance(items, np.array(data["weights"]), RELATIONS["containment"])
        if kind == "lis":
            return LisInstance(np.array(data["x"]))
        if kind == "uss":
            return SubsetSumInstance(inst.n, tuple(data["S"]))
        if kind == "concave-refuel":
            return refuel_instance(data["x"], int(data["k"]))
        if kind == "minplus":
            return as_ext_array(data["a"]), as_ext_array(data["b"])
        if kind == "mininnprod":
            return InnerProductInstance(np.array(data["a"]), np.array(data["b"]), r=parse_scalar(data["r"]))
        if kind == "selection":
            rel = RELATIONS[p.get("relation", "domination")]
            return SelectionInstance(np.array(data["a"]), np.array(data["b"]), rel)
    except (KeyError, TypeError) as exc:
        raise UsageError(f"malformed {inst.kind} payload: {exc}") from exc
    raise UsageError(f"unknown kind {inst.kind!r}")
