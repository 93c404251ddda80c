"""Regression fixtures produced by the package's own exhaustive searches."""
from __future__ import annotations

import itertools

from .gfmat import FieldMatrix, decode

# Lexicographically least M in GF(2)^(8x4) that one extraction round with
# eps = 1/4, t = 1 reports as rigid: d_V(1) = 2 < rank - ceil(4/4) = 3.
RIGID_FIXTURE_ROWS = (
    (0, 0, 0, 1),
    (0, 0, 1, 0),
    (0, 0, 1, 1),
    (0, 1, 0, 0),
    (0, 1, 0, 1),
    (1, 0, 0, 0),
    (1, 0, 1, 0),
    (1, 1, 0, 0),
)
RIGID_FIXTURE_EPS = "1/4"
RIGID_FIXTURE_T = 1


def rigid_fixture() -> FieldMatrix:
    return FieldMatrix.from_rows(RIGID_FIXTURE_ROWS, 2, n=4)


def distinct_types_after_quotient(rows: set[int], z: int) -> int:
    """Nonzero images of the rows under GF(2)^4 -> GF(2)^4 / <z>."""
    return len({min(r, r ^ z) for r in rows if r != z and r})


def low_inner_dim_rows(rows: set[int]) -> bool:
    """d_V(1) <= 2 for a rank-4 V in GF(2)^m given by its row types.

    A 3-dimensional W inside V lies in a 1-sparse subspace of dimension <= 4
    iff W's coordinates take at most 4 distinct nonzero values. Three-
    dimensional W correspond to quotients by a nonzero z, so d_V(1) >= 3 iff
    some quotient leaves at most 4 distinct nonzero row types.
    """
    return all(distinct_types_after_quotient(rows, z) >= 5 for z in range(1, 16))


def search_rigid_fixture(max_rows: int = 8) -> FieldMatrix | None:
    """Lex-least GF(2)^(m x 4) matrix with d_V(1) <= 2, for the least m that has one.

    Zero and repeated rows do not change d_V(1), so only sets of distinct
    nonzero rows need scanning; for the least feasible m every row is
    distinct and nonzero, and the sorted set is the lex-least arrangement.
    """
    for size in range(4, max_rows + 1):
        for S in itertools.combinations(range(1, 16), size):
            if low_inner_dim_rows(set(S)):
                M = FieldMatrix.from_rows([decode(x, 2, 4) for x in S], 2, n=4)
                if M.rank() == 4:
                    return M
    return None


# Worst case over all of GF(2)^(4x3) of the least t admitting an (s = 3, t)
# linear data structure, from the exhaustive counting_lower_search run.
COUNTING_LOWER_2_3_4_3 = 2

# Exact row rigidity thresholds for r = 1, 2, 3 of the code matrices.
CODE_ROW_THRESHOLDS = {
    "hamming74": (3, 1, 1),
    "extended_hamming84": (3, 1, 1),
}

# Inner dimension d_M(1) of each shipped code matrix.
CODE_INNER_DIM_T1 = {
    "repetition_block": 2,
    "hamming74": 3,
    "extended_hamming84": 3,
}
