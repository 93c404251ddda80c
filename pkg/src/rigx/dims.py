"""Exhaustive inner and outer dimension oracles.

A t-sparse subspace of GF(p)^m is the column space of an m x k matrix with at
most t nonzeros per row. Every column subset of such a matrix is again t-row
sparse, so a t-sparse subspace of dimension d always has a t-row-sparse
generator with exactly d columns (pick a column basis), and padding with zero
columns keeps the bound. Hence:

* the inner dimension only needs generators with exactly rank(M) columns;
* the outer dimension is the least s for which some t-row-sparse m x s
  generator covers colspace(M).

Generators are enumerated row-major lexicographically. Each distinct column
space is kept once, tagged with the index of its first generator, so the
reported witness is always the lexicographically least optimal generator.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Iterator

from ._util import charge, sparse_row_choices
from .gfmat import (
    FieldMatrix,
    SubspaceBasis,
    check_prime,
    decode,
    gf2_key,
    key_mask,
    mask_dim,
    span_key,
)


@dataclass(frozen=True)
class SparseGenerator:
    G: FieldMatrix
    t: int

    def __post_init__(self):
        if self.t < 0:
            raise ValueError("t must be non-negative")
        if self.G.row_sparsity() > self.t:
            raise ValueError(f"generator has a row with {self.G.row_sparsity()} > t={self.t} nonzeros")

    @property
    def space(self) -> SubspaceBasis:
        return self.G.colspace()


@dataclass(frozen=True)
class DimWitness:
    """Result of an inner- or outer-dimension scan.

    ``subspace`` is colspace(witness) ∩ V for the inner dimension and the
    covering space colspace(witness) for the outer dimension. ``shortcut`` is
    set when t >= rank(M) made the sparsity bound vacuous and no scan ran.
    """

    kind: str
    value: int
    witness: SparseGenerator
    subspace: SubspaceBasis
    exhausted: int
    shortcut: bool = False


@dataclass(frozen=True)
class AboveMax:
    """No t-sparse cover with at most s_max dimensions: a lower bound D > s_max."""

    s_max: int
    exhausted: int
    value: None = field(default=None, init=False)


@lru_cache(maxsize=None)
def row_options(k: int, t: int, p: int) -> tuple[tuple[int, ...], ...]:
    """All length-k rows with at most t nonzeros, in lexicographic order."""
    return tuple(v for v in itertools.product(range(p), repeat=k) if sum(1 for a in v if a) <= t)


def enumerate_sparse_generators(m: int, k: int, t: int, p: int = 2, budget: int | None = None) -> Iterator[SparseGenerator]:
    check_prime(p)
    opts = row_options(k, t, p)
    charge("enumerate_sparse_generators", len(opts) ** m, budget)
    for rows in itertools.product(opts, repeat=m):
        yield SparseGenerator(FieldMatrix.from_rows(rows, p, n=k), t)


def generator_at(index: int, m: int, k: int, t: int, p: int) -> FieldMatrix:
    """The index-th generator in enumeration order (mixed radix, row 0 most significant)."""
    opts = row_options(k, t, p)
    rows = []
    for _ in range(m):
        index, r = divmod(index, len(opts))
        rows.append(opts[r])
    return FieldMatrix.from_rows(rows[::-1], p, n=k)


@dataclass(frozen=True)
class SparseTable:
    """Distinct column spaces of all t-row-sparse m x k generators."""

    m: int
    k: int
    t: int
    p: int
    count: int
    keys: tuple[tuple[int, ...], ...]
    first: tuple[int, ...]

    def masks(self) -> tuple[int, ...]:
        return _table_masks(self)


@lru_cache(maxsize=512)
def _table_masks(table: SparseTable) -> tuple[int, ...]:
    return tuple(key_mask(k, table.p, table.m) for k in table.keys)


def _partial_columns(rows: range, k: int, opts, p: int, m: int) -> list[tuple[int, ...]]:
    """Column encodings contributed by a block of rows, in enumeration order."""
    out = [(0,) * k]
    for i in rows:
        w = p ** (m - 1 - i)
        out = [tuple(c + o[j] * w for j, c in enumerate(prev)) for prev in out for o in opts]
    return out


@lru_cache(maxsize=256)
def sparse_table(m: int, k: int, t: int, p: int) -> SparseTable:
    opts = row_options(k, t, p)
    half = m // 2
    head = _partial_columns(range(half), k, opts, p, m)
    tail = _partial_columns(range(half, m), k, opts, p, m)
    seen: dict[tuple[int, ...], int] = {}
    ntail = len(tail)
    for a_idx, a in enumerate(head):
        base = a_idx * ntail
        for b_idx, b in enumerate(tail):
            cols = [x + y for x, y in zip(a, b)]
            if p == 2:
                key = gf2_key(cols)
            else:
                key = span_key([decode(c, p, m) for c in cols], p, m)
            if key not in seen:
                seen[key] = base + b_idx
    items = sorted(seen.items(), key=lambda kv: kv[1])
    return SparseTable(m, k, t, p, len(head) * ntail, tuple(k for k, _ in items), tuple(i for _, i in items))


def _mask_key(mask: int, p: int, m: int) -> tuple[int, ...]:
    members = []
    x = 0
    while mask:
        if mask & 1:
            members.append(x)
        mask >>= 1
        x += 1
    if p == 2:
        return gf2_key(members)
    return span_key([decode(v, p, m) for v in members], p, m)


def _basis_generator(V: SubspaceBasis, t: int) -> SparseGenerator:
    """V's canonical basis as an m x dim generator (t >= dim makes it t-sparse)."""
    G = FieldMatrix.from_columns(V.basis, V.ambient, V.p)
    return SparseGenerator(G, max(t, G.row_sparsity()))


def inner_dimension(M: FieldMatrix, t: int, budget: int | None = None) -> DimWitness:
    """d_V(t) for V = colspace(M), with the lexicographically least witness."""
    if t < 0:
        raise ValueError("t must be non-negative")
    V = M.colspace()
    if t < V.dim:
        charge("inner_dimension", sparse_row_choices(V.dim, t, M.p) ** M.m, budget)
    return _inner(V, t)


@lru_cache(maxsize=1 << 14)
def _inner(V: SubspaceBasis, t: int) -> DimWitness:
    # the answer depends on colspace(M) only, so it is cached on V
    r, m, p = V.dim, V.ambient, V.p
    if t >= r:
        return DimWitness("inner", r, _basis_generator(V, t), V, 0, shortcut=True)
    table = sparse_table(m, r, t, p)
    maskV = V.mask
    best, best_i = -1, 0
    for i, mask in enumerate(table.masks()):
        d = mask_dim(mask & maskV, p, m)
        if d > best:
            best, best_i = d, i
            if d == r:
                break
    G = generator_at(table.first[best_i], m, r, t, p)
    inter = SubspaceBasis.from_key(_mask_key(table.masks()[best_i] & maskV, p, m), p, m)
    return DimWitness("inner", best, SparseGenerator(G, t), inter, table.count)


def outer_dimension(M: FieldMatrix, t: int, s_max: int, budget: int | None = None) -> DimWitness | AboveMax:
    """D_V(t) if it is at most s_max, else AboveMax.

    Column counts are scanned upward from rank(M) and the scan stops at the
    first cover. Levels above m are never needed when t >= 1 because the
    identity is a 1-sparse cover of everything.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    V = M.colspace()
    r, m, p = V.dim, M.m, M.p
    if s_max < r:
        return AboveMax(s_max, 0)
    if t >= r:
        return DimWitness("outer", r, _basis_generator(V, t), V, 0, shortcut=True)
    exhausted = 0
    top = s_max if t == 0 else min(s_max, m)
    for s in range(r, top + 1):
        charge("outer_dimension", sparse_row_choices(s, t, p) ** m, budget)
        hit = _outer_level(V, t, s)
        if isinstance(hit, DimWitness):
            return replace(hit, exhausted=exhausted + hit.exhausted)
        exhausted += hit
    return AboveMax(s_max, exhausted)


@lru_cache(maxsize=1 << 14)
def _outer_level(V: SubspaceBasis, t: int, s: int) -> DimWitness | int:
    """First s-column cover of V, or the number of generators scanned."""
    m, p = V.ambient, V.p
    table = sparse_table(m, s, t, p)
    maskV = V.mask
    for i, mask in enumerate(table.masks()):
        if maskV & ~mask == 0:
            G = generator_at(table.first[i], m, s, t, p)
            U = SubspaceBasis.from_key(table.keys[i], p, m)
            return DimWitness("outer", s, SparseGenerator(G, t), U, table.first[i] + 1)
    return table.count


def check_witness(M: FieldMatrix, w: DimWitness) -> bool:
    """Re-verify a witness from scratch with plain rank computations."""
    G = w.witness.G
    if G.row_sparsity() > w.witness.t or G.m != M.m:
        return False
    V = M.colspace()
    U = G.colspace()
    if w.kind == "inner":
        if G.n > V.dim:
            return False
        inter_dim = V.dim + U.dim - (V + U).dim
        return inter_dim == w.value
    return G.n == w.value and U.contains_subspace(V)


def dimension_inequality(M: FieldMatrix, t: int, budget: int | None = None) -> tuple[int, int, int]:
    """(d, D, 2 rank): the inner/outer sum bound d + D >= 2 dim V, computed exactly."""
    inner = inner_dimension(M, t, budget)
    r = M.rank()
    outer = outer_dimension(M, t, max(M.m, r), budget)
    if isinstance(outer, AboveMax):
        # only possible for t = 0 with V != 0, where D is infinite
        return inner.value, math.inf, 2 * r
    return inner.value, outer.value, 2 * r
