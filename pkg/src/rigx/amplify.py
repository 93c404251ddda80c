"""Row-to-global rigidity amplification with linear locally decodable codes.

Only the span property of a linear LDC is used: after deleting any
delta-fraction of the rows of E, every standard basis vector e_i is still
spanned by at most q surviving rows.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from ._util import as_fraction, charge, resolve_budget
from .errors import DimensionMismatch
from .gfmat import FieldMatrix, hstack, span_key


@dataclass(frozen=True)
class LinearLDC:
    E: FieldMatrix
    q_queries: int
    delta: Fraction
    verified: bool
    note: str = ""

    @property
    def m_prime(self) -> int:
        return self.E.m


@dataclass(frozen=True)
class CounterexampleR:
    R: tuple[int, ...]
    i: int


def _spans_unit(rows: list[tuple[int, ...]], i: int, p: int, n: int) -> bool:
    e = tuple(1 if j == i else 0 for j in range(n))
    key = span_key(rows, p, n)
    return span_key([*rows, e], p, n) == key


def ldc_span_check(E: FieldMatrix, q_queries: int, delta, budget: int | None = None) -> bool | CounterexampleR:
    """Exhaustive span-property check.

    Deleting fewer rows can only help, so it suffices to delete exactly
    floor(delta m') rows; deletion sets are scanned in combination order and
    the first failing (R, i) is returned.
    """
    delta = as_fraction(delta)
    m, n, p = E.m, E.n, E.p
    drop = math.floor(delta * m)
    small = [J for size in range(1, q_queries + 1) for J in itertools.combinations(range(m), size)]
    limit = resolve_budget(budget)
    charge("ldc_span_check", math.comb(m, drop) * max(len(small), 1), limit)
    rows = E.rows
    spans = {}
    for J in small:
        mask = 0
        for i in range(n):
            if _spans_unit([rows[j] for j in J], i, p, n):
                mask |= 1 << i
        if mask:
            spans[J] = mask
    full = (1 << n) - 1
    for D in itertools.combinations(range(m), drop):
        dead = set(D)
        got = 0
        for J, mask in spans.items():
            if not dead.intersection(J):
                got |= mask
                if got == full:
                    break
        if got != full:
            i = next(i for i in range(n) if not got >> i & 1)
            R = tuple(j for j in range(m) if j not in dead)
            return CounterexampleR(R, i)
    return True


def make_ldc(E: FieldMatrix, q_queries: int, delta, declared: bool = False, note: str = "", budget: int | None = None) -> LinearLDC:
    """Wrap a generator; the span property is checked unless declared."""
    delta = as_fraction(delta)
    if not declared:
        res = ldc_span_check(E, q_queries, delta, budget)
        if res is not True:
            raise ValueError(f"span property fails: e_{res.i} not spanned inside R={res.R}")
    return LinearLDC(E, q_queries, delta, not declared, note)


HADAMARD_NOTE = (
    "rows a and a+e_i pair up into 2^(k-1) disjoint pairs summing to e_i; "
    "deleting 2^(k-2) rows leaves a pair intact"
)


def hadamard_generator(k: int) -> FieldMatrix:
    return FieldMatrix.from_rows(list(itertools.product((0, 1), repeat=k)), 2, n=k)


def hadamard_ldc(k: int, declared: bool | None = None, budget: int | None = None) -> LinearLDC:
    """Hadamard code: rows are all of GF(2)^k in lexicographic order, q = 2, delta = 1/4.

    By default the span property is checked exhaustively for k <= 4 and
    declared (with the pairing argument as note) above that.
    """
    if not 1 <= k <= 12:
        raise ValueError("hadamard_ldc supports 1 <= k <= 12")
    if declared is None:
        declared = k > 4
    return make_ldc(hadamard_generator(k), 2, Fraction(1, 4), declared, HADAMARD_NOTE if declared else "", budget)


def apply_ldc(ldc: LinearLDC, M: FieldMatrix) -> FieldMatrix:
    """E M: the code applied to every column of M."""
    if ldc.E.n != M.m or ldc.E.p != M.p:
        raise DimensionMismatch(f"E is {ldc.E.shape} over GF({ldc.E.p}), M is {M.shape} over GF({M.p})")
    return ldc.E @ M


def global_bound(ldc: LinearLDC, row_threshold: int) -> int:
    """floor(delta * (tau - 1) * m' / q): E M's global threshold must exceed this."""
    return math.floor(ldc.delta * (row_threshold - 1) * ldc.m_prime / ldc.q_queries)


def stack_square(M: FieldMatrix, copies: int) -> FieldMatrix:
    """Side-by-side copies of M."""
    if copies < 1:
        raise ValueError("copies must be >= 1")
    return hstack(*([M] * copies))


def square_up(M: FieldMatrix) -> tuple[FieldMatrix, int]:
    """m x m matrix: floor(m/n) copies of M plus zero columns to fill.

    Zero columns change neither rank nor any rigidity threshold.
    """
    if M.n == 0 or M.n > M.m:
        raise DimensionMismatch("need 1 <= n <= m to square up")
    copies = M.m // M.n
    S = stack_square(M, copies)
    if S.n < M.m:
        S = hstack(S, FieldMatrix.zeros(M.m, M.m - S.n, M.p))
    return S, copies
