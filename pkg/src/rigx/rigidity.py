"""Exact row, global and strong rigidity thresholds.

A matrix B has rank < r iff its rows lie in some subspace L of dimension
r - 1, so the cheapest way to push M below rank r is found by scanning every
L of dimension <= r - 1 and moving each row of M to its nearest point of L.

Thresholds are reported rather than booleans: M is (r, t)-rigid iff
t < threshold, so one scan answers every t at once.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from ._util import charge, gaussian_binomial, gl_order, resolve_budget, sparse_row_choices
from .dims import DimWitness, inner_dimension, sparse_table
from .errors import PreconditionViolated, RankDeficient
from .gfmat import (
    Echelon,
    FieldMatrix,
    SubspaceBasis,
    decode,
    encode,
    encoded_distance,
    key_mask,
    key_members,
    span_key,
    subspace_keys,
)


@dataclass(frozen=True)
class RigidityCertificate:
    kind: str
    r: int
    threshold: int
    refuting_L: SubspaceBasis | None
    scanned: int
    refuting_T: FieldMatrix | None = None

    def is_rigid(self, t: int) -> bool:
        return t < self.threshold


@dataclass(frozen=True)
class StrongRigidity:
    """Answer to "is M (r, t)-strongly row rigid", with the evidence used."""

    rigid: bool
    method: str
    r: int
    t: int
    inner: DimWitness | None = None
    certificate: RigidityCertificate | None = None
    scanned: int = 0


def _subspace_count(n: int, r: int, p: int) -> int:
    return sum(gaussian_binomial(n, d, p) for d in range(min(r - 1, n) + 1))


@lru_cache(maxsize=4096)
def _distance_table(key: tuple[int, ...], p: int, n: int) -> tuple[int, ...]:
    """Distance from every vector of GF(p)^n to the subspace (multi-source BFS)."""
    size = p**n
    dist = [-1] * size
    frontier = list(key_members(key, p, n))
    for x in frontier:
        dist[x] = 0
    steps = [(j, p ** (n - 1 - j)) for j in range(n)]
    d = 0
    while frontier:
        d += 1
        nxt = []
        for x in frontier:
            for j, w in steps:
                digit = (x // w) % p
                for a in range(p):
                    if a != digit:
                        y = x + (a - digit) * w
                        if dist[y] < 0:
                            dist[y] = d
                            nxt.append(y)
        frontier = nxt
    return tuple(dist)


_TABLE_LIMIT = 1 << 16


def _row_distances(key, p: int, n: int, rows: tuple[int, ...]) -> list[int]:
    if p**n <= _TABLE_LIMIT:
        table = _distance_table(key, p, n)
        return [table[x] for x in rows]
    members = key_members(key, p, n)
    return [min(encoded_distance(x, u, p, n) for u in members) for x in rows]


@lru_cache(maxsize=65536)
def _scan(p: int, n: int, rows: tuple[int, ...], r: int, total: bool) -> tuple[int, tuple[int, ...], int]:
    """(threshold, refuting key, subspaces scanned) for encoded rows."""
    distinct = tuple(sorted(set(rows)))
    weight = [rows.count(x) for x in distinct]
    best, best_key, scanned = None, (), 0
    for dim in range(min(r - 1, n) + 1):
        for key in subspace_keys(n, dim, p):
            scanned += 1
            ds = _row_distances(key, p, n, distinct)
            cost = sum(d * w for d, w in zip(ds, weight)) if total else max(ds, default=0)
            if best is None or cost < best:
                best, best_key = cost, key
    return best, best_key, scanned


def _threshold(M: FieldMatrix, r: int, total: bool, budget: int | None) -> RigidityCertificate:
    if r < 1:
        raise ValueError("rank parameter r must be >= 1")
    kind = "global" if total else "row"
    charge(f"{kind}_rigidity_threshold", _subspace_count(M.n, r, M.p), budget)
    rows = tuple(encode(row, M.p) for row in M.rows)
    thr, key, scanned = _scan(M.p, M.n, rows, r, total)
    return RigidityCertificate(kind, r, thr, SubspaceBasis.from_key(key, M.p, M.n), scanned)


def row_rigidity_threshold(M: FieldMatrix, r: int, budget: int | None = None) -> RigidityCertificate:
    """min over L (dim <= r-1) of the largest row distance to L."""
    return _threshold(M, r, False, budget)


def global_rigidity_threshold(M: FieldMatrix, r: int, budget: int | None = None) -> RigidityCertificate:
    """min over L (dim <= r-1) of the summed row distances to L."""
    return _threshold(M, r, True, budget)


def nearest_point(v: Sequence[int], L: SubspaceBasis) -> tuple[int, ...]:
    """Closest member of L to v; ties go to the lexicographically least member."""
    x = encode(v, L.p)
    best = min(key_members(L.key, L.p, L.ambient), key=lambda u: (encoded_distance(x, u, L.p, L.ambient), u))
    return decode(best, L.p, L.ambient)


def reconstruct(M: FieldMatrix, L: SubspaceBasis) -> tuple[FieldMatrix, FieldMatrix]:
    """(A, B) with M = A + B, rows of B in L and each row of A as light as possible."""
    B = FieldMatrix.from_rows([nearest_point(row, L) for row in M.rows], M.p, n=M.n)
    return M - B, B


def invertible_matrices(n: int, p: int = 2, budget: int | None = None):
    """All of GL(n, p) in row-major lexicographic order."""
    charge("invertible_matrices", gl_order(n, p), budget)
    vectors = list(itertools.product(range(p), repeat=n))

    def extend(prefix: list[tuple[int, ...]], ech: Echelon):
        if len(prefix) == n:
            yield FieldMatrix.from_rows(prefix, p, n=n)
            return
        for v in vectors:
            if ech.reduce(v) != [0] * n:
                e2 = Echelon(p, n)
                e2.rows, e2.pivots = list(ech.rows), list(ech.pivots)
                e2.add(v)
                yield from extend(prefix + [v], e2)

    yield from extend([], Echelon(p, n))


@lru_cache(maxsize=16)
def _gl_images(n: int, p: int) -> tuple[tuple[FieldMatrix, tuple[int, ...]], ...]:
    """Every invertible T with the table x -> x T on encoded row vectors."""
    out = []
    for T in invertible_matrices(n, p, budget=gl_order(n, p)):
        vecs = [decode(x, p, n) for x in range(p**n)]
        images = FieldMatrix.from_rows(vecs, p, n=n) @ T
        out.append((T, tuple(encode(v, p) for v in images.rows)))
    return tuple(out)


def strong_threshold(M: FieldMatrix, r: int, budget: int | None = None) -> RigidityCertificate:
    """min over invertible T of the row threshold of M T (first minimiser kept)."""
    limit = resolve_budget(budget)
    if r < 1:
        raise ValueError("rank parameter r must be >= 1")
    charge("strong_threshold", gl_order(M.n, M.p) * _subspace_count(M.n, r, M.p), limit)
    p, n = M.p, M.n
    rows = tuple(encode(row, p) for row in M.rows)
    best = None
    count = 0
    for T, image in _gl_images(n, p):
        count += 1
        thr, key, _ = _scan(p, n, tuple(image[x] for x in rows), r, False)
        if best is None or thr < best[0]:
            best = (thr, key, T)
            if thr == 0:
                break
    thr, key, T = best
    return RigidityCertificate("strong", r, thr, SubspaceBasis.from_key(key, p, n), count, refuting_T=T)


def _sum_cover_rigid(M: FieldMatrix, r: int, t: int, budget: int | None) -> tuple[bool, int]:
    """True iff V fits in no A + B with A t-sparse of dim <= n and dim B < r."""
    V = M.colspace()
    m, n, p = M.m, M.n, M.p
    charge("sum_cover", sparse_row_choices(n, t, p) ** m * _subspace_count(m, r, p), budget)
    table = sparse_table(m, n, t, p)
    b_keys = [k for d in range(min(r - 1, m) + 1) for k in subspace_keys(m, d, p)]
    maskV = V.mask
    scanned = 0
    for a_key in table.keys:
        for b_key in b_keys:
            scanned += 1
            s = span_key([decode(x, p, m) for x in a_key + b_key], p, m)
            if maskV & ~key_mask(s, p, m) == 0:
                return False, scanned
    return True, scanned


def strong_row_rigidity(M: FieldMatrix, r: int, t: int, method: str = "inner_dim", budget: int | None = None) -> StrongRigidity:
    """Is M (r, t)-row rigid in every basis of its column space?

    ``inner_dim`` uses d_V(t) <= rank - r (needs full column rank);
    ``gl_enum`` checks M T for every invertible T; ``sum_cover`` checks that V
    is not inside any (t-sparse) + (dim < r) sum of subspaces.
    """
    if r < 1 or t < 0:
        raise ValueError("need r >= 1 and t >= 0")
    method = method.replace("-", "_")
    if method == "inner_dim":
        rank = M.rank()
        if rank < M.n:
            raise RankDeficient(f"rank {rank} < n = {M.n}; the inner-dimension test needs full column rank")
        w = inner_dimension(M, t, budget)
        return StrongRigidity(w.value <= rank - r, method, r, t, inner=w, scanned=w.exhausted)
    if method == "gl_enum":
        cert = strong_threshold(M, r, budget)
        return StrongRigidity(cert.is_rigid(t), method, r, t, certificate=cert, scanned=cert.scanned)
    if method == "sum_cover":
        rigid, scanned = _sum_cover_rigid(M, r, t, budget)
        return StrongRigidity(rigid, method, r, t, scanned=scanned)
    raise ValueError(f"unknown method {method!r}")


def refutation_inner_dim_check(M: FieldMatrix, A: FieldMatrix, B: FieldMatrix, r: int, t: int, budget: int | None = None) -> bool:
    """Given M = A + B with A t-row-sparse and rank(B) <= r, is d_V(t) >= n - 2r?

    This is the implication the non-rigidity argument actually proves; the
    function returns the oracle's answer, so False would be a counterexample.
    """
    if A.shape != M.shape or B.shape != M.shape or A + B != M:
        raise PreconditionViolated("A + B does not reproduce M")
    if A.row_sparsity() > t:
        raise PreconditionViolated(f"A has a row with {A.row_sparsity()} > t={t} nonzeros")
    if B.rank() > r:
        raise PreconditionViolated(f"rank(B) = {B.rank()} > r = {r}")
    if M.rank() != M.n:
        raise PreconditionViolated("M must have full column rank")
    return inner_dimension(M, t, budget).value >= M.n - 2 * r


# name used by the operation table
lemma11_check = refutation_inner_dim_check
