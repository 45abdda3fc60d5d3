import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from lwslab import solve_naive
from lwslab.core import WorkStats
from lwslab.nearlinear import (
    ConcaveInstance,
    LisInstance,
    MonotoneMatrixView,
    SubsetSumInstance,
    check_quadrangle,
    check_total_monotonicity,
    concave_lws,
    lis_length,
    lis_quadratic,
    refuel_instance,
    smawk_col_minima,
    subset_sum_quadratic,
    unbounded_subset_sum,
)
from lwslab.oracles import lis_dp, lis_patience, subset_sum_bitset


def view(rows):
    data = np.array(rows)
    return MonotoneMatrixView(data.shape[0], data.shape[1], lambda i, j: int(data[i, j]))


def test_lis_examples():
    assert lis_length(LisInstance([1, 2, 3])) == 3
    assert lis_length(LisInstance([3, 1, 4, 1, 5, 9, 2, 6])) == 4
    assert lis_length(LisInstance([5, 4, 3])) == 1


def test_uss_examples():
    assert unbounded_subset_sum(SubsetSumInstance(11, (1,)))
    assert not unbounded_subset_sum(SubsetSumInstance(9, (4, 6)))
    assert unbounded_subset_sum(SubsetSumInstance(13, (4, 5)))


def test_smawk_examples():
    assert smawk_col_minima(view([[0]])) == [0]
    assert smawk_col_minima(view(np.full((5, 7), 3))) == [0] * 7


def test_quadrangle_examples():
    assert check_quadrangle(refuel_instance(np.cumsum(np.arange(1, 18)), 4), exhaustive=True)
    linear = ConcaveInstance(10, lambda i, j: j - i)
    assert check_quadrangle(linear, exhaustive=True)
    assert concave_lws(linear).tolist() == list(range(11))
    w = {(0, 2): 10, (1, 2): 0, (1, 3): 0, (0, 3): 0, (0, 1): 0, (2, 3): 0}
    bad = ConcaveInstance(3, np.vectorize(lambda i, j: w.get((int(i), int(j)), 0)))
    assert not check_quadrangle(bad, exhaustive=True)
    assert not check_quadrangle(bad)


def test_total_monotonicity_examples():
    assert not check_total_monotonicity(view([[1, 0], [0, 1]]))
    assert check_total_monotonicity(view(np.full((3, 3), 2)))


def test_single_step_concave():
    inst = refuel_instance([0, 7], 3)
    assert concave_lws(inst).tolist() == [0, 16]


@given(st.lists(st.integers(-30, 30), min_size=1, max_size=80))
def test_lis_agrees(x):
    inst = LisInstance(x)
    assert lis_length(inst) == lis_quadratic(inst) == lis_patience(x) == lis_dp(x)


@given(st.integers(1, 300), st.sets(st.integers(1, 300), min_size=1, max_size=5))
def test_uss_agrees(n, s):
    s = {v for v in s if v <= n} or {n}
    inst = SubsetSumInstance(n, tuple(s))
    assert unbounded_subset_sum(inst) == subset_sum_bitset(n, inst.S) == subset_sum_quadratic(inst)


@st.composite
def tm_matrices(draw):
    rows, cols = draw(st.integers(1, 20)), draw(st.integers(1, 20))
    t = draw(st.lists(st.integers(-40, 40), min_size=rows, max_size=rows))
    c = draw(st.integers(-64, 64))
    return np.array([[t[i] + (j - i + c) ** 2 for j in range(cols)] for i in range(rows)])


@given(tm_matrices())
def test_smawk_matches_scan(data):
    m = MonotoneMatrixView(*data.shape, lambda i, j: int(data[i, j]))
    assert check_total_monotonicity(m)
    assert smawk_col_minima(m) == data.argmin(axis=0).tolist()


@given(st.lists(st.integers(1, 12), min_size=1, max_size=60), st.integers(0, 40))
def test_concave_matches_naive(gaps, k):
    inst = refuel_instance(np.concatenate([[0], np.cumsum(gaps)]), k)
    assert np.array_equal(concave_lws(inst), solve_naive(inst.model()))


@given(st.lists(st.integers(1, 12), min_size=2, max_size=14), st.integers(0, 40))
def test_quadrangle_implies_total_monotonicity(gaps, k):
    inst = refuel_instance(np.concatenate([[0], np.cumsum(gaps)]), k)
    assert check_quadrangle(inst, exhaustive=True)
    n = inst.n
    half = (n + 1) // 2
    m = MonotoneMatrixView(half, n + 1 - half, lambda r, c: inst.w(r, half + c))
    assert check_total_monotonicity(m)


def test_counters_near_linear():
    def queries(fn, n):
        stats = WorkStats()
        fn(n, stats)
        return stats.queries

    def lis(n, s):
        lis_length(LisInstance(np.random.default_rng(n).integers(0, n, n)), s)

    ratios = [queries(lis, 2 * n) / queries(lis, n) for n in (256, 512)]
    assert max(ratios) < 2.5
    quad = [queries(lambda n, s: lis_quadratic(LisInstance(np.arange(n)), s), 2 * n) /
            queries(lambda n, s: lis_quadratic(LisInstance(np.arange(n)), s), n) for n in (256, 512)]
    assert min(quad) > 3.5
