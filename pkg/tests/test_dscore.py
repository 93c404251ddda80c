import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import field_matrices
from rigx.dims import SparseGenerator, outer_dimension
from rigx.dscore import (
    Evasive,
    LinearDS,
    SumsetWitness,
    answer_table_ds,
    counting_lower_search,
    counting_probe_count,
    counting_upper_ds,
    cover_from_ds,
    ds_from_cover,
    linearize,
    min_probes,
    sumset_evasive_bruteforce,
    trivial_ds,
    verify_ds,
)
from rigx.errors import NotACover, NotComputingM, PreconditionViolated
from rigx.fixtures import COUNTING_LOWER_2_3_4_3
from rigx.gfmat import FieldMatrix


# --- verify_ds ------------------------------------------------------------------


def test_identity_ds_valid():
    I = FieldMatrix.identity(3)
    assert verify_ds(I, LinearDS(I, I, 1)).valid


def test_sparsity_violation_names_row():
    I = FieldMatrix.identity(2)
    Q = FieldMatrix.from_rows([(1, 0), (1, 1)], 2)
    check = verify_ds(FieldMatrix.from_rows([(1, 0), (1, 1)], 2), LinearDS(I, Q, 1))
    assert not check.valid
    assert [(v.kind, v.row) for v in check.violations] == [("sparsity", 1)]


def test_entry_violation():
    I = FieldMatrix.identity(2)
    check = verify_ds(FieldMatrix.from_rows([(1, 1), (0, 1)], 2), LinearDS(I, I, 1))
    assert [(v.kind, v.row, v.col) for v in check.violations] == [("entry", 0, 1)]


def test_three_cell_example(example3x2):
    P = FieldMatrix.from_rows([(1, 0), (0, 1), (1, 1)], 2)
    ds = LinearDS(P, FieldMatrix.identity(3), 1)
    assert verify_ds(example3x2, ds).valid and ds.s == 3


def test_ds_text_roundtrip(example3x2):
    ds = answer_table_ds(example3x2)
    text = ds.to_text()
    assert text.startswith("gfds 1 p=2 m=3 n=2 s=3 t=1\n")
    assert LinearDS.from_text(text) == ds


# --- covers ---------------------------------------------------------------------------


def test_cover_from_own_columns():
    M = FieldMatrix.from_rows([(1, 0), (1, 1), (0, 1)], 2)
    ds = ds_from_cover(M, SparseGenerator(M, 2))
    assert ds.P == FieldMatrix.identity(2)


def test_cover_from_outer_witness(example3x2):
    w = outer_dimension(example3x2, 1, 3)
    ds = ds_from_cover(example3x2, w.witness)
    assert verify_ds(example3x2, ds).valid and (ds.s, ds.t) == (3, 1)
    back = cover_from_ds(ds)
    assert back.G.n <= ds.s and back.t == 1


def test_cover_missing_direction(example3x2):
    G = FieldMatrix.from_columns([(1, 0, 1)], 3, 2)
    with pytest.raises(NotACover):
        ds_from_cover(example3x2, SparseGenerator(G, 1))


@given(field_matrices(m=(1, 4), n=(1, 3)), st.integers(1, 2))
def test_cover_roundtrip(M, t):
    w = outer_dimension(M, t, M.m)
    ds = ds_from_cover(M, w.witness)
    assert verify_ds(M, ds).valid
    assert outer_dimension(M, t, M.m).value <= cover_from_ds(ds).G.n


# --- sumset evasiveness ------------------------------------------------------------------


def test_repeated_row_witness():
    res = sumset_evasive_bruteforce([(1, 1), (1, 1), (1, 1)], 1, 1)
    assert isinstance(res, SumsetWitness) and res.S == ((1, 1),)


def test_example_is_evasive(example3x2):
    res = sumset_evasive_bruteforce(example3x2.rows, 2, 1)
    assert isinstance(res, Evasive) and res.scanned == 6


def test_everything_set_never_evasive(example3x2):
    assert isinstance(sumset_evasive_bruteforce(example3x2.rows, 4, 1), SumsetWitness)


@given(field_matrices(m=(1, 4), n=(2, 3)), st.integers(1, 4), st.integers(1, 2))
def test_witness_is_a_data_structure(M, s, t):
    res = sumset_evasive_bruteforce(M.rows, s, t, 2, n=M.n)
    if isinstance(res, SumsetWitness):
        assert verify_ds(M, res.as_ds(2, M.n, t)).valid


# --- linearization ------------------------------------------------------------------------


def test_linear_box_reproduces_P():
    P0 = FieldMatrix.from_rows([(1, 0, 1), (0, 1, 1), (1, 1, 0)], 2)
    Q = FieldMatrix.from_rows([(1, 1, 0), (0, 0, 1)], 2)
    M = Q @ P0
    ds = linearize(lambda x: P0.apply(x), Q, M)
    assert ds.P == P0 and verify_ds(M, ds).valid


def test_affine_box_in_kernel_gives_linear_part():
    P0 = FieldMatrix.identity(3)
    Q = FieldMatrix.from_rows([(1, 1, 0)], 2)
    c = (1, 1, 0)  # Q c = 0
    box = lambda x: tuple((a + b) % 2 for a, b in zip(P0.apply(x), c))
    ds = linearize(box, Q, Q @ P0)
    assert ds.P == P0


def test_nonlinear_box_rejected():
    Q = FieldMatrix.identity(1)
    M = FieldMatrix.from_rows([(1, 1)], 2)
    with pytest.raises(NotComputingM):
        linearize(lambda x: (x[0] * x[1],), Q, M)


# --- counting bounds ---------------------------------------------------------------------


def test_counting_probe_formula():
    # mu = 2, t = ceil(8 / (6/2 - 1)) = 4
    assert counting_probe_count(8, 64, 1, 2) == 4


def test_counting_upper_example():
    rng = np.random.default_rng(3)
    for _ in range(10):
        M = FieldMatrix(rng.integers(0, 2, size=(5, 8)), 2)
        ds = counting_upper_ds(M, 64, 1)
        assert (ds.t, ds.s) == (4, 16) and verify_ds(M, ds).valid


def test_counting_upper_falls_back_to_trivial():
    M = FieldMatrix.identity(8)
    assert counting_upper_ds(M, 32, 1) == trivial_ds(M)


def test_counting_upper_single_part():
    # n = 2, s = 4096: t = ceil(2 / (12/2 - 1)) = 1, one part holding everything
    M = FieldMatrix.from_rows([(1, 1), (0, 1)], 2)
    ds = counting_upper_ds(M, 4096, 1)
    assert ds.t == 1 and ds.s == 4 and verify_ds(M, ds).valid


@given(st.integers(2, 10), st.integers(2, 4000), st.sampled_from([1, 2, "1/2"]))
def test_counting_upper_bounds(n, s, eps):
    M = FieldMatrix.identity(n)
    ds = counting_upper_ds(M, s, eps)
    assert verify_ds(M, ds).valid
    t = counting_probe_count(n, s, eps, 2)
    if t is not None:
        assert ds.t == t and ds.s <= s


def test_counting_lower_tiny():
    assert counting_lower_search(2, 2, 2, 2).t_min_worst == 1


def test_counting_lower_frozen_value():
    res = counting_lower_search(2, 3, 4, 3)
    assert res.t_min_worst == COUNTING_LOWER_2_3_4_3
    assert res.scanned == 4096
    assert min_probes(res.hardest, 3) == res.t_min_worst


def test_counting_lower_answer_table_regime():
    # s >= m and s >= n: one probe always suffices for nonzero targets
    assert counting_lower_search(2, 2, 3, 3).t_min_worst == 1


def test_counting_lower_threads_agree():
    a = counting_lower_search(2, 2, 3, 2, threads=1)
    b = counting_lower_search(2, 2, 3, 2, threads=4)
    assert a == b


def test_counting_lower_needs_enough_space():
    with pytest.raises(PreconditionViolated):
        counting_lower_search(2, 3, 4, 2)


def brute_min_probes(M, s):
    for t in range(M.n + 1):
        for rows in itertools.product(range(2**s), repeat=M.m):
            Q = FieldMatrix.from_rows([[(x >> (s - 1 - j)) & 1 for j in range(s)] for x in rows], 2, n=s)
            if Q.row_sparsity() <= t and all(v in Q.colspace() for v in M.cols):
                return t
    return None


@given(field_matrices(m=(2, 3), n=(1, 2)))
def test_min_probes_matches_brute_force(M):
    assert min_probes(M, 2) == brute_min_probes(M, 2)
