from fractions import Fraction

import pytest

from rigx.codes import build_code, friedman_matrix
from rigx.dims import AboveMax
from rigx.errors import BudgetExceeded
from rigx.fixtures import rigid_fixture
from rigx.gfmat import FieldMatrix
from rigx.pipelines import pipeline_ds_to_square_rigid, pipeline_rigid_to_ds_lb


def test_identity_takes_cover_branch():
    res = pipeline_ds_to_square_rigid(FieldMatrix.identity(4), Fraction(1, 2), 1)
    assert res.branch == "Cover" and res.extraction.implied_ds == (4, 1)


def test_fixture_full_chain():
    res = pipeline_ds_to_square_rigid(rigid_fixture(), Fraction(1, 4), 1)
    assert res.branch == "Rigid" and res.r == 1
    assert res.row_cert.threshold == 2
    assert res.encoded_global.threshold == 512 and res.global_lower == 32
    assert res.square.shape == (256, 256) and res.copies == 64
    assert res.square_threshold == 64 * 512


def test_budget_failure_names_stage():
    with pytest.raises(BudgetExceeded) as exc:
        pipeline_ds_to_square_rigid(rigid_fixture(), Fraction(1, 4), 1, budget=1000)
    assert exc.value.operation.startswith("extract/")


def test_hamming_gives_ds_lower_bound():
    M = friedman_matrix(build_code("hamming74"))
    res = pipeline_rigid_to_ds_lb(M, 1, 1)
    assert res.hypothesis and res.s_max == 4
    assert isinstance(res.outer, AboveMax) and res.inner_value == 3


def test_non_rigid_reports_hypothesis_failure():
    res = pipeline_rigid_to_ds_lb(FieldMatrix.identity(3), 1, 1)
    assert not res.hypothesis and res.outer is None


def test_large_t_never_rigid():
    M = friedman_matrix(build_code("hamming74"))
    assert not pipeline_rigid_to_ds_lb(M, 1, 4).hypothesis
