"""scikit-learn style wrappers.

``fit`` takes the target matrix M (m x n array over GF(p)). Data-structure
estimators then map input vectors x (rows of X, length n) to memory cells
with ``transform`` and to answers M x with ``predict``.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .amplify import apply_ldc, hadamard_ldc
from .dims import AboveMax, inner_dimension, outer_dimension
from .dscore import counting_upper_ds, ds_from_cover, verify_ds
from .extract import RigidSubmatrix, find_rigid_submatrix
from .rigidity import global_rigidity_threshold, nearest_point, reconstruct, row_rigidity_threshold
from .validation import check_field_matrix, check_count, check_vectors


class InnerDimension(BaseEstimator):
    def __init__(self, t=1, p=2, budget=None):
        self.t = t
        self.p = p
        self.budget = budget

    def fit(self, X, y=None):
        M = check_field_matrix(X, self.p)
        w = inner_dimension(M, check_count(self.t, "t"), self.budget)
        self.value_ = w.value
        self.witness_ = w.witness.G.data.copy()
        self.exhausted_ = w.exhausted
        self.n_features_in_ = M.n
        return self


class _DataStructureMixin(TransformerMixin):
    def _store(self, M, ds):
        if not verify_ds(M, ds):
            raise AssertionError("fitted data structure does not compute M")
        self.ds_ = ds
        self.P_ = ds.P.data.copy()
        self.Q_ = ds.Q.data.copy()
        self.space_ = ds.s
        self.probes_ = ds.t
        self.n_features_in_ = M.n

    def transform(self, X):
        """Memory contents P x for every row x of X."""
        check_is_fitted(self, "ds_")
        X = check_vectors(X, self.n_features_in_, self.p)
        return np.mod(X @ self.P_.T, self.p)

    def predict(self, X):
        """Answers Q P x, read from at most ``probes_`` cells per query."""
        cells = self.transform(X)
        return np.mod(cells @ self.Q_.T, self.p)


class CoverDataStructure(_DataStructureMixin, BaseEstimator):
    """Least-space t-probe linear data structure, from the outer-dimension oracle."""

    def __init__(self, t=1, s_max=None, p=2, budget=None):
        self.t = t
        self.s_max = s_max
        self.p = p
        self.budget = budget

    def fit(self, X, y=None):
        M = check_field_matrix(X, self.p)
        t = check_count(self.t, "t")
        s_max = max(M.m, M.n) if self.s_max is None else check_count(self.s_max, "s_max")
        w = outer_dimension(M, t, s_max, self.budget)
        if isinstance(w, AboveMax):
            raise ValueError(f"no {t}-probe structure with at most {s_max} cells")
        self.outer_dimension_ = w.value
        self._store(M, ds_from_cover(M, w.witness))
        return self


class CountingDataStructure(_DataStructureMixin, BaseEstimator):
    """Partition structure: t parts, every combination of each part stored."""

    def __init__(self, s=64, eps=1, p=2):
        self.s = s
        self.eps = eps
        self.p = p

    def fit(self, X, y=None):
        M = check_field_matrix(X, self.p)
        self._store(M, counting_upper_ds(M, check_count(self.s, "s", 1), self.eps))
        return self


class RigidityDecomposition(TransformerMixin, BaseEstimator):
    """Cheapest M = A + B with rank(B) < r (row or global cost).

    ``transform`` moves each row of X to its nearest point of the fitted
    low-dimensional row space L.
    """

    def __init__(self, r=1, kind="row", p=2, budget=None):
        self.r = r
        self.kind = kind
        self.p = p
        self.budget = budget

    def fit(self, X, y=None):
        M = check_field_matrix(X, self.p)
        r = check_count(self.r, "r", 1)
        if self.kind == "row":
            cert = row_rigidity_threshold(M, r, self.budget)
        elif self.kind == "global":
            cert = global_rigidity_threshold(M, r, self.budget)
        else:
            raise ValueError("kind must be 'row' or 'global'")
        A, B = reconstruct(M, cert.refuting_L)
        self.threshold_ = cert.threshold
        self.L_ = cert.refuting_L
        self.sparse_ = A.data.copy()
        self.low_rank_ = B.data.copy()
        self.n_features_in_ = M.n
        return self

    def is_rigid(self, t):
        check_is_fitted(self, "threshold_")
        return t < self.threshold_

    def transform(self, X):
        check_is_fitted(self, "L_")
        X = check_vectors(X, self.n_features_in_, self.p)
        return np.array([nearest_point(row, self.L_) for row in X.tolist()], dtype=np.int64).reshape(X.shape)


class RigidSubmatrixExtractor(TransformerMixin, BaseEstimator):
    """Column selector for the rigid block found by the extraction rounds."""

    def __init__(self, eps=0.5, k_iters=1, t=1, p=2, budget=None):
        self.eps = eps
        self.k_iters = k_iters
        self.t = t
        self.p = p
        self.budget = budget

    def fit(self, X, y=None):
        M = check_field_matrix(X, self.p)
        out = find_rigid_submatrix(M, self.eps, check_count(self.k_iters, "k_iters"), check_count(self.t, "t"), self.budget)
        self.outcome_ = out
        self.rigid_ = isinstance(out, RigidSubmatrix)
        self.n_features_in_ = M.n
        return self

    def get_support(self, indices=False):
        check_is_fitted(self, "outcome_")
        cols = list(self.outcome_.columns) if self.rigid_ else []
        if indices:
            return np.array(cols, dtype=np.intp)
        mask = np.zeros(self.n_features_in_, dtype=bool)
        mask[cols] = True
        return mask

    def transform(self, X):
        M = check_field_matrix(X, self.p)
        if M.n != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} columns, got {M.n}")
        return M.data[:, self.get_support()]


class LDCEncoder(TransformerMixin, BaseEstimator):
    """Hadamard encoding of every column: M -> E M."""

    def __init__(self, declared=None):
        self.declared = declared

    def fit(self, X, y=None):
        M = check_field_matrix(X, 2)
        self.ldc_ = hadamard_ldc(M.m, self.declared)
        self.n_rows_in_ = M.m
        return self

    def transform(self, X):
        check_is_fitted(self, "ldc_")
        return apply_ldc(self.ldc_, check_field_matrix(X, 2)).data.copy()
