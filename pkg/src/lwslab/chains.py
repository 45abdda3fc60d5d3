"""Chain LWS over a pluggable relation, selection problems, and the
reductions between them in both directions.

Items are numpy rows (vectors, 0/1 set indicators, or length-1 scalars).
Pair indices returned by selection solvers are 1-based.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import partial
from typing import Callable, Optional, Sequence

import numpy as np

from .core import StaticQuery, WeightModel, WorkStats, solve_naive, solve_via_static
from .ext import INF, max_abs_finite


class ContractError(ValueError):
    """An input violates a documented structural precondition."""


class Relation:
    """A binary relation R on items; ``holds(x, y)`` means (x, y) in R."""

    name = "relation"

    def holds(self, x, y) -> bool:
        raise NotImplementedError

    def holds_matrix(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        return np.array([[self.holds(x, y) for y in ys] for x in xs], dtype=bool).reshape(
            len(xs), len(ys)
        )

    def natural_order(self, items: np.ndarray) -> Optional[np.ndarray]:
        """A permutation with no R-pair pointing forward, or None if unavailable."""
        return None

    def bottom(self, items: np.ndarray):
        return None

    def top(self, items: np.ndarray):
        return None


class Domination(Relation):
    """x <= y componentwise (non-strict): vector domination / nested boxes."""

    name = "domination"

    def holds(self, x, y) -> bool:
        return bool(np.all(np.asarray(x) <= np.asarray(y)))

    def holds_matrix(self, xs, ys):
        xs = np.asarray(xs)
        ys = np.asarray(ys)
        return np.all(xs[:, None, :] <= ys[None, :, :], axis=-1)

    def natural_order(self, items):
        # a dominated pair has a strictly smaller sum unless the items are equal,
        # so decreasing sum leaves only equal items as forward pairs
        items = np.asarray(items)
        keys = [tuple(-v for v in row) for row in items.tolist()]
        sums = items.sum(axis=1)
        return np.array(sorted(range(len(items)), key=lambda k: (-sums[k], keys[k])), dtype=np.int64)

    def bottom(self, items):
        items = np.asarray(items)
        return np.full(items.shape[1], min(0, int(items.min())), dtype=np.int64)

    def top(self, items):
        items = np.asarray(items)
        return np.full(items.shape[1], int(items.max()) + 1, dtype=np.int64)


class Containment(Domination):
    """x subset-of y for 0/1 indicator vectors over a fixed universe."""

    name = "containment"

    def bottom(self, items):
        return np.zeros(np.asarray(items).shape[1], dtype=np.int64)

    def top(self, items):
        return np.ones(np.asarray(items).shape[1], dtype=np.int64)


class Orthogonality(Relation):
    """<x, y> = 0: selection under this relation is orthogonal vectors."""

    name = "orthogonal"

    def holds(self, x, y) -> bool:
        return int(np.dot(x, y)) == 0

    def holds_matrix(self, xs, ys):
        return (np.asarray(xs) @ np.asarray(ys).T) == 0


class StrictlyLess(Relation):
    """x < y on scalar items (stored as length-1 rows)."""

    name = "less"

    def holds(self, x, y) -> bool:
        return bool(np.asarray(x).ravel()[0] < np.asarray(y).ravel()[0])

    def holds_matrix(self, xs, ys):
        return np.asarray(xs)[:, :1] < np.asarray(ys)[:, 0][None, :]

    def natural_order(self, items):
        return np.argsort(-np.asarray(items)[:, 0], kind="stable")

    def bottom(self, items):
        return np.array([int(np.asarray(items).min()) - 1])

    def top(self, items):
        return np.array([int(np.asarray(items).max()) + 1])


RELATIONS = {
    "domination": Domination(),
    "containment": Containment(),
    "orthogonal": Orthogonality(),
    "less": StrictlyLess(),
}


def sets_to_vectors(sets: Sequence[Sequence[int]], universe: int) -> np.ndarray:
    """Indicator rows for subsets of {1..universe}."""
    out = np.zeros((len(sets), universe), dtype=np.int64)
    for k, s in enumerate(sets):
        for e in s:
            out[k, e - 1] = 1
    return out


def _as_items(items) -> np.ndarray:
    arr = np.asarray(items, dtype=np.int64)
    if arr.ndim == 1:
        arr = arr[:, None]
    return arr


@dataclass(frozen=True)
class ChainInstance:
    """Items x_0..x_n with weights w_1..w_{n-1} (interior) or w_1..w_n.

    When only the n - 1 interior weights are given, the edge into x_n costs 0.
    """

    items: np.ndarray
    weights: np.ndarray
    relation: Relation

    def __post_init__(self):
        items = _as_items(self.items)
        w = np.asarray(self.weights, dtype=np.int64)
        n = len(items) - 1
        if n < 1:
            raise ValueError("a chain instance needs at least x_0 and x_1")
        if len(w) == n - 1:
            w = np.concatenate([w, [0]])
        if len(w) != n:
            raise ValueError("expected n - 1 interior weights (or n with the terminal)")
        if np.any(w == INF):
            raise ValueError("chain weights are finite")
        object.__setattr__(self, "items", items)
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return len(self.items) - 1

    def model(self, stats: Optional[WorkStats] = None) -> "ChainModel":
        return ChainModel(self, stats)


class ChainModel(WeightModel):
    """w(i, j) = w_j when R(x_i, x_j), INF otherwise."""

    def __init__(self, inst: ChainInstance, stats=None):
        super().__init__(inst.n, stats)
        self.inst = inst
        self._w = np.concatenate([[0], inst.weights])
        self._bound = max_abs_finite(inst.weights)

    def weight_bound(self):
        return self._bound

    def _block(self, rows, cols):
        rel = self.inst.relation.holds_matrix(self.inst.items[rows], self.inst.items[cols])
        return np.where(rel, self._w[cols][None, :], INF)


@dataclass(frozen=True)
class SelectionInstance:
    a: np.ndarray
    b: np.ndarray
    relation: Relation

    def __post_init__(self):
        object.__setattr__(self, "a", _as_items(self.a))
        object.__setattr__(self, "b", _as_items(self.b))


SelectionOracle = Callable[[SelectionInstance], Optional[tuple]]


def selection_naive(inst: SelectionInstance) -> Optional[tuple[int, int]]:
    """Lexicographically smallest 1-based (i, j) with R(a_i, b_j), else None."""
    if len(inst.a) == 0 or len(inst.b) == 0:
        return None
    hits = np.argwhere(inst.relation.holds_matrix(inst.a, inst.b))
    if len(hits) == 0:
        return None
    return int(hits[0, 0]) + 1, int(hits[0, 1]) + 1


def chain_lws_naive(inst: ChainInstance, stats: Optional[WorkStats] = None) -> int:
    """Least chain weight from x_0 to x_n (INF when no chain exists)."""
    return int(solve_naive(inst.model(stats))[inst.n])


def static_chain_via_selection(
    model: ChainModel,
    q: StaticQuery,
    oracle: SelectionOracle = selection_naive,
) -> np.ndarray:
    """One static chain batch through a selection oracle on sqrt-sized groups.

    I is sorted by T ascending and both sides are cut into ceil(sqrt N)
    groups.  Group pairs are visited in lexicographic order; each oracle hit
    (a_i, b_j) is resolved by scanning its A-group for the first item related
    to b_j, which carries the smallest T among all still-possible sources.
    b_j is then deleted and the same pair is asked again.
    """
    q.check(model)
    inst = model.inst
    rel = inst.relation
    stats = model.stats
    big_n = q.big_n
    out = np.full(big_n, INF, dtype=np.int64)
    finite = np.flatnonzero(q.t_in != INF)
    order = finite[np.argsort(q.t_in[finite], kind="stable")]
    src = q.rows[order]
    dst = q.cols
    g = math.ceil(math.sqrt(big_n))
    size = math.ceil(big_n / g)
    a_groups = [src[k : k + size] for k in range(0, len(src), size)]
    b_groups = [list(range(k, min(big_n, k + size))) for k in range(0, big_n, size)]
    stats.queries += big_n + len(src)  # each item is read once into the groups
    for a_grp in a_groups:
        a_items = inst.items[a_grp]
        for b_grp in b_groups:
            while b_grp:
                stats.oracle_calls += 1
                hit = oracle(SelectionInstance(a_items, inst.items[dst[b_grp]], rel))
                if hit is None:
                    break
                pos = hit[1] - 1
                jj = b_grp[pos]
                j = int(dst[jj])
                for i in a_grp.tolist():
                    stats.queries += 1
                    if rel.holds(inst.items[i], inst.items[j]):
                        out[jj] = int(q.t_in[i - q.a - 1]) + int(model._w[j])
                        break
                else:
                    raise AssertionError("selection oracle reported a non-related pair")
                b_grp.pop(pos)
    return out


def chain_lws_fast(
    inst: ChainInstance,
    oracle: SelectionOracle = selection_naive,
    stats: Optional[WorkStats] = None,
) -> int:
    """Chain LWS through static batches answered by a selection oracle."""
    t = solve_via_static(inst.model(stats), partial(static_chain_via_selection, oracle=oracle))
    return int(t[inst.n])


def _dedupe(items: np.ndarray) -> np.ndarray:
    _, first = np.unique(items, axis=0, return_index=True)
    return items[np.sort(first)]


def forward_pairs(items: np.ndarray, relation: Relation) -> list[tuple[int, int]]:
    """All j < k with R(items[j], items[k]); empty for a natural ordering."""
    m = relation.holds_matrix(items, items)
    return [(int(j), int(k)) for j, k in np.argwhere(np.triu(m, k=1))]


def build_selection_gadget(inst: SelectionInstance) -> ChainInstance:
    """bottom, a (natural order), b (natural order), top, with all weights -1.

    A chain may take at most one item from each block, so the least weight
    is -3 exactly when some a_i relates to some b_j.
    """
    rel = inst.relation
    a = _dedupe(inst.a)
    b = _dedupe(inst.b)
    blocks = []
    for side in (a, b):
        order = rel.natural_order(side)
        if order is None:
            raise ContractError(f"{rel.name} has no natural ordering")
        side = side[order]
        if forward_pairs(side, rel):
            raise ContractError(f"natural ordering of {rel.name} has a forward pair")
        blocks.append(side)
    everything = np.vstack([a, b])
    bot, top = rel.bottom(everything), rel.top(everything)
    if bot is None or top is None:
        raise ContractError(f"{rel.name} has no bottom/top sentinel")
    items = np.vstack([bot[None, :], blocks[0], blocks[1], top[None, :]])
    return ChainInstance(items, -np.ones(len(items) - 1, dtype=np.int64), rel)


def selection_via_chain(
    inst: SelectionInstance,
    chain_solver: Callable[[ChainInstance], int] = chain_lws_naive,
) -> bool:
    """Decide selection with one chain LWS call on the sentinel gadget."""
    return int(chain_solver(build_selection_gadget(inst))) == -3


def longest_nested_boxes(
    boxes,
    weights=None,
    solver: Callable[[ChainInstance], int] = chain_lws_naive,
) -> int:
    """Least-weight nesting chain; with the default weights -1 this is -(longest chain).

    Boxes are sorted by coordinate sum (ties lexicographic), wrapped in the
    zero box and a box one larger than every coordinate, and solved as a
    chain instance under non-strict domination.
    """
    boxes = _as_items(boxes)
    if np.any(boxes < 0):
        raise ValueError("box dimensions must be non-negative")
    w = -np.ones(len(boxes), dtype=np.int64) if weights is None else np.asarray(weights, dtype=np.int64)
    if len(w) != len(boxes):
        raise ValueError("one weight per box")
    order = sorted(range(len(boxes)), key=lambda k: (int(boxes[k].sum()), tuple(boxes[k].tolist())))
    d = boxes.shape[1]
    items = np.vstack(
        [np.zeros((1, d), dtype=np.int64), boxes[order], np.full((1, d), int(boxes.max()) + 1)]
    )
    return int(solver(ChainInstance(items, w[order], Domination())))
