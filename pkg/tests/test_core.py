import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lwslab import (
    INF,
    ExplicitModel,
    FunctionModel,
    LowRankModel,
    StaticQuery,
    ToeplitzModel,
    WorkStats,
    check_table,
    solve_naive,
    solve_static_naive,
    solve_via_static,
)
from lwslab.oracles import lws_paths
from strategies import coin_vectors, explicit_matrices


def explicit(entries: dict, n: int) -> ExplicitModel:
    m = np.full((n + 1, n + 1), INF, dtype=np.int64)
    for (i, j), v in entries.items():
        m[i, j] = v
    return ExplicitModel(m)


# ------------------------------------------------------------ frozen examples


def test_empty_instance():
    assert solve_naive(ExplicitModel(np.zeros((1, 1), dtype=np.int64))).tolist() == [0]


def test_two_paths():
    model = explicit({(0, 1): 5, (0, 2): 9, (1, 2): 3}, 2)
    assert solve_naive(model).tolist() == [0, 5, 8]


def test_unit_coin_only():
    assert solve_naive(ToeplitzModel([1, INF, INF])).tolist() == [0, 1, 2, 3]


def test_static_examples():
    one = explicit({(1, 2): 7}, 2)
    assert solve_static_naive(one, StaticQuery(0, 1, np.array([0]))).tolist() == [7]
    two = explicit({(1, 3): 4, (2, 3): 10, (2, 4): 0}, 4)
    assert solve_static_naive(two, StaticQuery(0, 2, np.array([2, 1]))).tolist() == [6, 1]
    assert solve_static_naive(two, StaticQuery(0, 2, np.array([INF, INF]))).tolist() == [INF, INF]


def test_odd_length_tail():
    # n = 7 forces the tail scan; T[7] = 6 from coins 2+2+2+1
    model = ToeplitzModel([3, 1, INF, INF, INF, INF, INF])
    table = solve_via_static(model, solve_static_naive)
    assert table.tolist() == solve_naive(model).tolist() == [0, 3, 1, 4, 2, 5, 3, 6]


def test_single_place():
    model = explicit({(0, 1): -4}, 1)
    assert solve_via_static(model).tolist() == [0, -4]


def test_check_table():
    model = explicit({(0, 1): 5, (0, 2): 9, (1, 2): 3}, 2)
    assert check_table(model, [0, 5, 8])
    assert not check_table(model, [1, 5, 8])
    assert not check_table(model, [0, 5, 9])


def test_query_bounds_and_counting():
    stats = WorkStats()
    model = ToeplitzModel([1, 2, 3], stats)
    assert model.query(0, 3) == 3
    model.block(np.array([0, 1]), np.array([2, 3]))
    assert stats.queries == 5
    with pytest.raises(IndexError):
        model.query(2, 2)


def test_naive_counts_every_pair():
    stats = WorkStats()
    solve_naive(ToeplitzModel(np.ones(40, dtype=np.int64), stats))
    assert stats.queries == 40 * 41 // 2


# ------------------------------------------------------------ properties


@given(explicit_matrices(max_n=7))
def test_naive_matches_path_enumeration(m):
    assert solve_naive(ExplicitModel(m)).tolist() == lws_paths(m)


@given(explicit_matrices(max_n=40))
def test_driver_is_exact(m):
    model = ExplicitModel(m)
    assert np.array_equal(solve_via_static(model, solve_static_naive), solve_naive(model))


@given(coin_vectors(max_n=60))
def test_driver_is_exact_on_toeplitz(w):
    model = ToeplitzModel(w)
    assert np.array_equal(solve_via_static(model), solve_naive(model))


@given(explicit_matrices(max_n=30))
def test_solved_table_verifies(m):
    model = ExplicitModel(m)
    assert check_table(model, solve_naive(model))


@given(explicit_matrices(max_n=30), st.data())
def test_static_batches_see_final_prefixes(m, data):
    # every batch must be issued with T[a+1..a+N] already final
    model = ExplicitModel(m)
    final = solve_naive(model)
    seen = []

    def spy(mod, q):
        seen.append(q)
        return solve_static_naive(mod, q)

    solve_via_static(model, spy)
    for q in seen:
        assert np.array_equal(q.t_in, final[q.a + 1 : q.a + q.big_n + 1])


@given(st.integers(1, 300))
def test_static_width_is_n_log_n(n):
    stats = WorkStats()
    solve_via_static(ToeplitzModel(np.ones(n, dtype=np.int64), stats))
    assert stats.static_width <= 2 * n * max(1, math.ceil(math.log2(n)))


def test_low_rank_model_weights():
    mu = np.array([[1, 2], [0, 1]])
    sigma = np.array([[3, 1], [2, 2]])
    model = LowRankModel(mu, sigma)
    assert model.query(0, 1) == 5
    assert model.query(1, 2) == 2


def test_function_model():
    model = FunctionModel(4, lambda i, j: (j - i) ** 2)
    assert solve_naive(model).tolist() == [0, 1, 2, 3, 4]
