import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lwslab import solve_naive, solve_static_naive, solve_via_static
from lwslab.core import StaticQuery, WorkStats
from lwslab.lowrank import (
    InnerProductInstance,
    LowRankInstance,
    allinnprod_naive,
    allinnprod_via_mininnprod,
    mininnprod_naive,
    mininnprod_witness,
    reduce_mininnprod_to_lowrank,
    static_lowrank_to_allinnprod,
)

A = [[1, 2], [3, 1]]
B = [[2, 2], [1, 1]]


def test_zero_vector_qualifies():
    assert mininnprod_naive(InnerProductInstance([[0, 0], [5, 5]], [[7, -3], [1, 1]], r=0))


def test_two_by_two_decision():
    assert mininnprod_naive(InnerProductInstance(A, B, r=3))
    assert not mininnprod_naive(InnerProductInstance(A, B, r=2))


def test_single_product():
    W = 6
    assert not mininnprod_naive(InnerProductInstance([W], [W], r=W * W - 1))


def test_column_minima():
    inst = InnerProductInstance(A, B)
    assert allinnprod_naive(inst).tolist() == [6, 3]
    assert allinnprod_via_mininnprod(inst).tolist() == [6, 3]
    assert allinnprod_naive(InnerProductInstance([[0, 0]] * 3, B)).tolist() == [0, 0]


def test_embedding_value():
    inst = InnerProductInstance(A, B, r=3)
    art = reduce_mininnprod_to_lowrank(inst)
    t = solve_naive(art.target.model())
    assert int(t[art.meta["value_index"]]) == 3
    assert art.extract(t) is True
    assert t.tolist() == [0, 0, 0, 6, 3, 3]


def test_embedding_trivial():
    inst = InnerProductInstance([0], [0], r=0)
    art = reduce_mininnprod_to_lowrank(inst)
    assert art.extract(solve_naive(art.target.model()))


def test_witness_examples():
    assert mininnprod_witness(InnerProductInstance(A, B, r=3)) == (1, 2)
    assert mininnprod_witness(InnerProductInstance(A, B, r=2)) is None
    # both pairs have product 1; the encoding prefers the larger (i-1)n + (j-1)
    assert mininnprod_witness(InnerProductInstance([[1], [1]], [[1]], r=1)) == (2, 1)


def test_constant_landscape_rounds():
    d, W = 2, 3
    inst = InnerProductInstance(np.ones((4, d)), np.ones((5, d)))
    log: list = []
    assert allinnprod_via_mininnprod(inst, round_log=log).tolist() == [d] * 5
    assert len(log) <= math.ceil(math.log2(2 * d * W * W + 1))


def test_bound_violation_rejected():
    with pytest.raises(ValueError):
        LowRankInstance([[9]], [[1]], W=5)


@st.composite
def ip_instances(draw, max_n=10, max_d=3, max_w=6):
    n = draw(st.integers(1, max_n))
    m = draw(st.integers(1, max_n))
    d = draw(st.integers(1, max_d))
    W = draw(st.integers(0, max_w))
    a = draw(st.lists(st.lists(st.integers(-W, W), min_size=d, max_size=d), min_size=n, max_size=n))
    b = draw(st.lists(st.lists(st.integers(-W, W), min_size=d, max_size=d), min_size=m, max_size=m))
    r = draw(st.integers(-d * W * W - 1, d * W * W + 1))
    return InnerProductInstance(np.array(a), np.array(b), r=r)


@given(ip_instances())
def test_witness_is_valid(inst):
    wit = mininnprod_witness(inst)
    products = inst.a @ inst.b.T
    if wit is None:
        assert products.min() > inst.r
    else:
        i, j = wit
        assert products[i - 1, j - 1] <= inst.r


@given(ip_instances())
def test_all_from_min_round_and_call_bounds(inst):
    stats = WorkStats()
    log: list = []
    got = allinnprod_via_mininnprod(inst, stats=stats, round_log=log)
    assert got.tolist() == allinnprod_naive(inst).tolist()
    assert len(log) <= math.ceil(math.log2(2 * inst.product_bound() + 1))
    groups = math.ceil(math.sqrt(len(inst.a))) * math.ceil(math.sqrt(len(inst.b)))
    assert all(calls <= groups + len(inst.b) for calls in log)


@given(ip_instances(max_n=8).filter(lambda x: len(x.a) == len(x.b)))
def test_embedding_exact(inst):
    art = reduce_mininnprod_to_lowrank(inst)
    t = solve_naive(art.target.model())
    assert int(t[2 * len(inst.a) + 1]) == int((inst.a @ inst.b.T).min())
    assert art.extract(t) == mininnprod_naive(inst)


@st.composite
def lowrank_instances(draw, max_n=30):
    n = draw(st.integers(1, max_n))
    d = draw(st.integers(1, 4))
    W = draw(st.integers(0, 10))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    return LowRankInstance(rng.integers(-W, W + 1, (n, d)), rng.integers(-W, W + 1, (n, d)), W=W)


@given(lowrank_instances())
def test_static_batch_as_allinnprod(inst):
    model = inst.model()
    assert np.array_equal(solve_via_static(model, static_lowrank_to_allinnprod), solve_naive(model))


@given(lowrank_instances(max_n=20), st.data())
def test_static_batch_single_call(inst, data):
    n = inst.n
    big_n = data.draw(st.integers(1, max(1, n // 2)))
    a = data.draw(st.integers(0, n - 2 * big_n)) if n >= 2 * big_n else None
    if a is None:
        return
    t_in = np.array(data.draw(st.lists(st.integers(-50, 50), min_size=big_n, max_size=big_n)))
    q = StaticQuery(a, big_n, t_in)
    assert np.array_equal(static_lowrank_to_allinnprod(inst.model(), q), solve_static_naive(inst.model(), q))


def test_zero_table_is_plain_column_minima():
    inst = LowRankInstance([[1, 0], [0, 1], [2, 2], [1, 1]], [[1, 1], [3, 0], [0, 2], [1, 2]])
    model = inst.model()
    q = StaticQuery(0, 2, np.zeros(2, dtype=np.int64))
    block = model.block(q.rows, q.cols)
    assert static_lowrank_to_allinnprod(model, q).tolist() == block.min(axis=0).tolist()
