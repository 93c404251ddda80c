import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import field_matrices
from rigx._util import gl_order
from rigx.errors import PreconditionViolated, RankDeficient
from rigx.gfmat import FieldMatrix, SubspaceBasis
from rigx.rigidity import (
    global_rigidity_threshold,
    invertible_matrices,
    refutation_inner_dim_check,
    reconstruct,
    row_rigidity_threshold,
    strong_row_rigidity,
    strong_threshold,
)


def naive_thresholds(M, r):
    """(row, global) by scanning every B of rank < r."""
    best_row = best_glob = None
    for flat in itertools.product(range(M.p), repeat=M.m * M.n):
        B = FieldMatrix(np.array(flat, dtype=np.int64).reshape(M.m, M.n), M.p)
        if B.rank() >= r:
            continue
        w = np.count_nonzero((M - B).data, axis=1)
        row, glob = int(w.max()), int(w.sum())
        best_row = row if best_row is None else min(best_row, row)
        best_glob = glob if best_glob is None else min(best_glob, glob)
    return best_row, best_glob


def test_identity_thresholds():
    I = FieldMatrix.identity(3)
    assert row_rigidity_threshold(I, 1).threshold == 1
    assert global_rigidity_threshold(I, 1).threshold == 3


def test_example_thresholds(example3x2):
    row = row_rigidity_threshold(example3x2, 2)
    assert row.threshold == 1
    assert row.refuting_L == SubspaceBasis.span([(1, 0)], 2, 2)
    assert global_rigidity_threshold(example3x2, 2).threshold == 2


def test_zero_matrix_threshold_zero():
    assert row_rigidity_threshold(FieldMatrix.zeros(3, 2), 2).threshold == 0


@given(field_matrices(m=(1, 3), n=(1, 3)), st.integers(1, 3))
def test_thresholds_match_naive_oracle(M, r):
    row, glob = naive_thresholds(M, r)
    assert row_rigidity_threshold(M, r).threshold == row
    assert global_rigidity_threshold(M, r).threshold == glob


@given(field_matrices(m=(1, 4), n=(1, 3), p=3), st.integers(1, 3))
def test_threshold_relations(M, r):
    row = row_rigidity_threshold(M, r).threshold
    glob = global_rigidity_threshold(M, r).threshold
    assert row <= glob <= M.m * row
    assert row_rigidity_threshold(M, r + 1).threshold <= row
    assert global_rigidity_threshold(M, r + 1).threshold <= glob


@given(field_matrices(m=(1, 4), n=(1, 3)), st.integers(1, 3))
def test_reconstruction_realises_global_threshold(M, r):
    cert = global_rigidity_threshold(M, r)
    A, B = reconstruct(M, cert.refuting_L)
    assert A + B == M and B.rank() < r
    assert int(np.count_nonzero(A.data)) == cert.threshold


def test_gl_orders():
    assert sum(1 for _ in invertible_matrices(2)) == 6 == gl_order(2, 2)
    assert sum(1 for _ in invertible_matrices(3)) == 168 == gl_order(3, 2)


# --- strong rigidity ---------------------------------------------------------------


def test_identity_not_strongly_rigid():
    I = FieldMatrix.identity(3)
    for method in ("inner_dim", "gl_enum", "sum_cover"):
        assert not strong_row_rigidity(I, 1, 1, method).rigid


def test_example_strongly_rigid_all_methods(example3x2):
    for method in ("inner_dim", "gl_enum", "sum_cover"):
        assert strong_row_rigidity(example3x2, 1, 1, method).rigid
    assert strong_row_rigidity(example3x2, 1, 1, "gl_enum").scanned == 6


def test_square_invertible_never_strongly_rigid():
    M = FieldMatrix.from_rows([(1, 1, 0), (0, 1, 1), (0, 0, 1)], 2)
    cert = strong_threshold(M, 1)
    assert cert.threshold == 1
    # the inverse turns M into the identity, whose rows have weight one
    assert (M @ cert.refuting_T).row_sparsity() == 1


def test_inner_dim_method_needs_full_column_rank():
    with pytest.raises(RankDeficient):
        strong_row_rigidity(FieldMatrix.from_rows([(1, 1), (1, 1)], 2), 1, 1, "inner_dim")


@given(field_matrices(m=(3, 4), n=(2, 2)), st.integers(1, 2), st.integers(1, 2))
def test_three_characterisations_agree(M, r, t):
    if M.rank() < M.n:
        return
    a = strong_row_rigidity(M, r, t, "inner_dim").rigid
    b = strong_row_rigidity(M, r, t, "gl_enum").rigid
    c = strong_row_rigidity(M, r, t, "sum_cover").rigid
    assert a == b == c
    if b:
        assert row_rigidity_threshold(M, r).is_rigid(t)


# --- decomposition forces inner dimension ----------------------------------------------


def test_refutation_bound_identity():
    I = FieldMatrix.identity(3)
    assert refutation_inner_dim_check(I, I, FieldMatrix.zeros(3, 3), 0, 1)


def test_refutation_bound_all_low_rank():
    M = FieldMatrix.from_rows([(1, 0), (0, 1), (1, 1)], 2)
    assert refutation_inner_dim_check(M, FieldMatrix.zeros(3, 2), M, 2, 0)


def test_refutation_bound_rejects_bad_decomposition(example3x2):
    with pytest.raises(PreconditionViolated):
        refutation_inner_dim_check(example3x2, example3x2, example3x2, 2, 2)
    with pytest.raises(PreconditionViolated):
        refutation_inner_dim_check(example3x2, example3x2, FieldMatrix.zeros(3, 2), 0, 1)


@given(field_matrices(m=(4, 4), n=(3, 3)), st.integers(1, 2), st.integers(1, 2))
def test_refutation_bound_on_refutations(M, r, t):
    if M.rank() < 3:
        return
    cert = row_rigidity_threshold(M, r)
    if cert.is_rigid(t):
        return
    A, B = reconstruct(M, cert.refuting_L)
    assert refutation_inner_dim_check(M, A, B, r, t)
