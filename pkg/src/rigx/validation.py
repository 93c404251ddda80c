"""Input checks shared by the estimators and the CLI."""
from __future__ import annotations

import numpy as np
from sklearn.utils import check_array

from .gfmat import FieldMatrix, check_prime


def check_field_matrix(X, p: int = 2, *, allow_empty_columns: bool = True) -> FieldMatrix:
    """Coerce an array-like of integers to a FieldMatrix over GF(p).

    Values must already lie in [0, p); silently reducing them would hide
    mistakes such as passing a GF(3) matrix to a GF(2) estimator.
    """
    if isinstance(X, FieldMatrix):
        if X.p != p:
            raise ValueError(f"matrix is over GF({X.p}), expected GF({p})")
        return X
    check_prime(p)
    arr = check_array(X, dtype=np.int64, ensure_min_features=0 if allow_empty_columns else 1)
    if arr.size and (arr.min() < 0 or arr.max() >= p):
        raise ValueError(f"entries must lie in [0, {p})")
    return FieldMatrix(arr, p)


def check_vectors(X, n: int, p: int) -> np.ndarray:
    """2-D integer array of input vectors of length n over GF(p)."""
    arr = check_array(X, dtype=np.int64, ensure_min_features=0)
    if arr.shape[1] != n:
        raise ValueError(f"expected vectors of length {n}, got {arr.shape[1]}")
    if arr.size and (arr.min() < 0 or arr.max() >= p):
        raise ValueError(f"entries must lie in [0, {p})")
    return arr


def check_count(value, name: str, minimum: int = 0) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < minimum:
        raise ValueError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)

