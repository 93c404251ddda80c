import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import field_matrices
from rigx.dims import (
    AboveMax,
    SparseGenerator,
    check_witness,
    dimension_inequality,
    enumerate_sparse_generators,
    inner_dimension,
    outer_dimension,
)
from rigx.errors import BudgetExceeded
from rigx.gfmat import FieldMatrix, hstack


def naive_inner(M, t):
    r = M.rank()
    best = 0
    for k in range(r + 1):
        for g in enumerate_sparse_generators(M.m, k, t, M.p):
            best = max(best, r + g.G.rank() - hstack(M, g.G).rank())
    return best


def naive_outer(M, t, s_max):
    for s in range(s_max + 1):
        for g in enumerate_sparse_generators(M.m, s, t, M.p):
            if hstack(g.G, M).rank() == g.G.rank():
                return s
    return None


# --- generators ------------------------------------------------------------------


def test_generator_counts():
    gens = list(enumerate_sparse_generators(2, 1, 1, 2))
    assert [g.G.cols[0] for g in gens] == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert sum(1 for _ in enumerate_sparse_generators(3, 2, 1, 2)) == 27
    only = list(enumerate_sparse_generators(1, 3, 0, 2))
    assert len(only) == 1 and only[0].G.rows == ((0, 0, 0),)


def test_generator_budget_reports_count():
    with pytest.raises(BudgetExceeded) as exc:
        list(enumerate_sparse_generators(3, 2, 1, 2, budget=5))
    assert exc.value.count == 27


def test_sparse_generator_rejects_dense_rows():
    with pytest.raises(ValueError):
        SparseGenerator(FieldMatrix.from_rows([(1, 1)], 2), 1)


# --- inner dimension -----------------------------------------------------------------


def test_inner_identity():
    assert inner_dimension(FieldMatrix.identity(3), 1).value == 3


def test_inner_example(example3x2):
    w = inner_dimension(example3x2, 1)
    assert w.value == 1 and w.exhausted == 27
    assert check_witness(example3x2, w)


def test_inner_large_t_is_rank():
    M = FieldMatrix.from_rows([(1, 1, 0), (0, 1, 1), (1, 0, 1), (1, 1, 1)], 2)
    w = inner_dimension(M, 3)
    assert w.value == 3 and w.shortcut


@given(field_matrices(m=(1, 4), n=(1, 3)), st.integers(0, 2))
def test_inner_matches_naive_oracle(M, t):
    w = inner_dimension(M, t)
    assert w.value == naive_inner(M, t)
    assert check_witness(M, w)
    assert 0 <= w.value <= M.rank()


@given(field_matrices(m=(2, 3), n=(1, 2), p=3), st.integers(0, 2))
def test_inner_matches_naive_oracle_gf3(M, t):
    assert inner_dimension(M, t).value == naive_inner(M, t)


# --- outer dimension -----------------------------------------------------------------


def test_outer_identity():
    assert outer_dimension(FieldMatrix.identity(3), 1, 3).value == 3


def test_outer_example(example3x2):
    w = outer_dimension(example3x2, 1, 3)
    assert w.value == 3 and check_witness(example3x2, w)
    low = outer_dimension(example3x2, 1, 2)
    assert isinstance(low, AboveMax) and low.exhausted == 27


def test_outer_large_t_is_rank(example3x2):
    assert outer_dimension(example3x2, 2, 2).value == 2


@given(field_matrices(m=(1, 4), n=(1, 3)), st.integers(0, 2))
def test_outer_matches_naive_oracle(M, t):
    s_max = M.m
    w = outer_dimension(M, t, s_max)
    expected = naive_outer(M, t, s_max)
    if expected is None:
        assert isinstance(w, AboveMax)
    else:
        assert w.value == expected and check_witness(M, w)


# --- properties ----------------------------------------------------------------------


@given(field_matrices(m=(1, 4), n=(1, 3)))
def test_monotone_in_t(M):
    inner = [inner_dimension(M, t).value for t in range(4)]
    outer = [outer_dimension(M, t, M.m).value for t in range(1, 4)]
    assert inner == sorted(inner)
    assert outer == sorted(outer, reverse=True)
    assert all(v >= M.rank() for v in outer)


@given(field_matrices(m=(1, 4), n=(1, 2)), st.integers(1, 2))
def test_dimension_inequality(M, t):
    d, D, two_r = dimension_inequality(M, t)
    assert d + D >= two_r


@given(field_matrices(m=(2, 4), n=(1, 2), p=3), st.integers(1, 2))
def test_dimension_inequality_gf3(M, t):
    d, D, two_r = dimension_inequality(M, t)
    assert d + D >= two_r
