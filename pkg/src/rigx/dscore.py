"""Linear data structures M = Q P: checking, building and converting them.

P (s x n) is the preprocessing map: it writes s memory cells from the input
x in GF(p)^n. Q (m x s) is the query map: answer i reads the cells where row
i of Q is nonzero, so a t-row-sparse Q means t probes per query.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from ._util import as_fraction, charge, parallel_map
from .dims import AboveMax, SparseGenerator, outer_dimension
from .errors import DimensionMismatch, FormatError, NoSolution, NotACover, NotComputingM, PreconditionViolated
from .gfmat import FieldMatrix, _parse_block, _parse_header, check_prime, decode, encode, solve_right, span_key


@dataclass(frozen=True)
class LinearDS:
    P: FieldMatrix
    Q: FieldMatrix
    t: int

    def __post_init__(self):
        if self.P.p != self.Q.p:
            raise DimensionMismatch("P and Q live over different fields")
        if self.Q.n != self.P.m:
            raise DimensionMismatch(f"Q has {self.Q.n} columns but P has {self.P.m} rows")

    @property
    def s(self) -> int:
        return self.P.m

    @property
    def p(self) -> int:
        return self.P.p

    def preprocess(self, x: Sequence[int]) -> tuple[int, ...]:
        return self.P.apply(x)

    def query(self, i: int, cells: Sequence[int]) -> int:
        row = self.Q.data[i]
        return int(sum(int(row[j]) * cells[j] for j in np.flatnonzero(row)) % self.p)

    def to_text(self) -> str:
        head = f"gfds 1 p={self.p} m={self.Q.m} n={self.P.n} s={self.s} t={self.t}"
        P = [" ".join(map(str, r)) for r in self.P.rows]
        Q = [" ".join(map(str, r)) for r in self.Q.rows]
        return "\n".join([head, *P, "", *Q]) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "LinearDS":
        lines = text.split("\n")
        if lines and lines[-1] == "":
            lines.pop()
        if not lines:
            raise FormatError("empty data structure text")
        p, m, n, s, t = _parse_header(lines[0], "gfds", ("p", "m", "n", "s", "t"))
        body = lines[1:]
        if len(body) != s + 1 + m or body[s] != "":
            raise FormatError(f"expected {s} P rows, a blank line, then {m} Q rows")
        P = FieldMatrix(_parse_block(body[:s], n, p).reshape(s, n), p)
        Q = FieldMatrix(_parse_block(body[s + 1 :], s, p).reshape(m, s), p)
        return cls(P, Q, t)


@dataclass(frozen=True)
class Violation:
    kind: str  # "shape", "sparsity" or "entry"
    row: int
    col: int | None = None
    detail: str = ""


@dataclass(frozen=True)
class DSCheck:
    violations: tuple[Violation, ...]

    @property
    def valid(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.valid


def verify_ds(M: FieldMatrix, ds: LinearDS) -> DSCheck:
    """Valid iff M = Q P exactly and every row of Q has at most t nonzeros."""
    if M.p != ds.p or M.m != ds.Q.m or M.n != ds.P.n:
        return DSCheck((Violation("shape", -1, None, f"M is {M.shape}, Q P is {(ds.Q.m, ds.P.n)}"),))
    out = []
    counts = np.count_nonzero(ds.Q.data, axis=1) if ds.s else np.zeros(M.m, dtype=int)
    for i, c in enumerate(counts):
        if c > ds.t:
            out.append(Violation("sparsity", i, None, f"{int(c)} probes > t={ds.t}"))
    diff = np.argwhere((ds.Q @ ds.P).data != M.data)
    for i, j in diff:
        out.append(Violation("entry", int(i), int(j)))
    return DSCheck(tuple(out))


def trivial_ds(M: FieldMatrix) -> LinearDS:
    """Store the input, read all of it: s = n, t = n."""
    return LinearDS(FieldMatrix.identity(M.n, M.p), M, M.n)


def answer_table_ds(M: FieldMatrix) -> LinearDS:
    """Store every answer, read one cell: s = m, t = 1."""
    return LinearDS(M, FieldMatrix.identity(M.m, M.p), 1)


def linearize(preproc: Callable[[tuple[int, ...]], Sequence[int]], Q: FieldMatrix, M: FieldMatrix, t: int | None = None, budget: int | None = None) -> LinearDS:
    """Replace an arbitrary preprocessing map by a linear one.

    The pair (preproc, Q) is first checked on every input in GF(p)^n. Cell
    i of the result is preproc(e_i) - preproc(0): the linear part, which for
    a linear box is exactly the box and in general computes the same answers
    because Q preproc(0) = M 0 = 0.
    """
    p, n = M.p, M.n
    t = Q.row_sparsity() if t is None else t
    if Q.row_sparsity() > t:
        raise PreconditionViolated(f"Q has a row with {Q.row_sparsity()} > t={t} nonzeros")
    if Q.m != M.m:
        raise DimensionMismatch(f"Q has {Q.m} rows, M has {M.m}")
    charge("linearize", p**n, budget)

    def cells(x):
        v = tuple(int(a) % p for a in preproc(x))
        if len(v) != Q.n:
            raise DimensionMismatch(f"black box returned {len(v)} cells, Q expects {Q.n}")
        return v

    for x in itertools.product(range(p), repeat=n):
        got = Q.apply(cells(x))
        want = M.apply(x)
        if got != want:
            raise NotComputingM(x, want, got)
    zero = cells((0,) * n)
    cols = []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        cols.append(tuple((a - b) % p for a, b in zip(cells(tuple(e)), zero)))
    P = FieldMatrix.from_columns(cols, Q.n, p)
    ds = LinearDS(P, Q, t)
    if not verify_ds(M, ds):
        raise AssertionError("linearized data structure failed verification")
    return ds


def ds_from_cover(M: FieldMatrix, gen: SparseGenerator) -> LinearDS:
    """Cells = coordinates of M's columns in the generator's basis."""
    try:
        P = solve_right(gen.G, M)
    except NoSolution as exc:
        raise NotACover(f"column {exc.column} of M is outside the generator's column space") from exc
    return LinearDS(P, gen.G, gen.t)


def cover_from_ds(ds: LinearDS) -> SparseGenerator:
    return SparseGenerator(ds.Q, ds.t)


# ---------------------------------------------------------------------------
# sumset evasiveness


@dataclass(frozen=True)
class Evasive:
    s: int
    t: int
    scanned: int


@dataclass(frozen=True)
class SumsetWitness:
    S: tuple[tuple[int, ...], ...]
    covered: tuple[tuple[tuple[int, int], ...], ...]  # per row: (index into S, coefficient)
    scanned: int

    def as_ds(self, p: int, n: int, t: int) -> LinearDS:
        P = FieldMatrix.from_rows(self.S, p, n=n)
        Q = np.zeros((len(self.covered), len(self.S)), dtype=np.int64)
        for i, combo in enumerate(self.covered):
            for j, c in combo:
                Q[i, j] = c
        return LinearDS(P, FieldMatrix(Q, p), t)


@lru_cache(maxsize=None)
def _t_span_mask(S: tuple[int, ...], t: int, p: int, n: int) -> int:
    vecs = [decode(x, p, n) for x in S]
    reach = {0}
    for _ in range(t):
        new = set(reach)
        for x in reach:
            xv = decode(x, p, n)
            for v in vecs:
                for c in range(1, p):
                    new.add(encode([(a + c * b) % p for a, b in zip(xv, v)], p))
        if new == reach:
            break
        reach = new
    mask = 0
    for x in reach:
        mask |= 1 << x
    return mask


@lru_cache(maxsize=64)
def _all_t_spans(n: int, s: int, t: int, p: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    return tuple((S, _t_span_mask(S, t, p, n)) for S in itertools.combinations(range(p**n), s))


def _combination(row: tuple[int, ...], S: Sequence[tuple[int, ...]], t: int, p: int) -> tuple[tuple[int, int], ...]:
    """First (subset, coefficients) expressing row, subsets of size <= t in order."""
    n = len(row)
    for size in range(t + 1):
        for J in itertools.combinations(range(len(S)), size):
            for coeffs in itertools.product(range(1, p), repeat=size):
                v = [0] * n
                for j, c in zip(J, coeffs):
                    v = [(a + c * b) % p for a, b in zip(v, S[j])]
                if tuple(v) == tuple(row):
                    return tuple(zip(J, coeffs))
    raise AssertionError("row is not in the t-span of S")


def sumset_evasive_bruteforce(rows: Sequence[Sequence[int]], s: int, t: int, p: int = 2, n: int | None = None, budget: int | None = None) -> Evasive | SumsetWitness:
    """Decide whether some s-point set S of GF(p)^n has every row in its t-span.

    S runs over all s-subsets of GF(p)^n (zero included) in lexicographic
    order; the first one that works is returned. This scan is independent of
    the outer-dimension oracle.
    """
    check_prime(p)
    rows = [tuple(int(a) for a in r) for r in rows]
    if n is None:
        if not rows:
            raise ValueError("n is required when there are no rows")
        n = len(rows[0])
    size = p**n
    if s >= size:
        S = tuple(decode(x, p, n) for x in range(size))
        return SumsetWitness(S, tuple(_combination(r, S, t, p) for r in rows), 0)
    charge("sumset_evasive_bruteforce", math.comb(size, s), budget)
    need = 0
    for r in rows:
        need |= 1 << encode(r, p)
    scanned = 0
    for S, mask in _all_t_spans(n, s, t, p):
        scanned += 1
        if need & ~mask == 0:
            Sv = tuple(decode(x, p, n) for x in S)
            return SumsetWitness(Sv, tuple(_combination(r, Sv, t, p) for r in rows), scanned)
    return Evasive(s, t, scanned)


# ---------------------------------------------------------------------------
# counting bounds


def _parts(n: int, t: int) -> list[range]:
    """Contiguous blocks; the first n mod t get ceil(n/t) inputs."""
    big, extra = divmod(n, t)
    out, start = [], 0
    for j in range(t):
        size = big + (1 if j < extra else 0)
        out.append(range(start, start + size))
        start += size
    return out


def _ceil_float(x: float) -> int:
    r = round(x)
    return int(r) if abs(x - r) < 1e-9 else math.ceil(x)


def counting_probe_count(n: int, s: int, eps, q: int) -> int | None:
    """t = ceil(n / (log s / (mu log q) - 1)) with mu = 1 + 1/eps, or None if
    the preconditions (s >= n^(1+eps), log s > 2 mu log q) fail."""
    eps = as_fraction(eps)
    if eps <= 0:
        raise PreconditionViolated("eps must be positive")
    mu = 1 + 1 / eps
    # s >= n^(1+eps) and s > q^(2 mu), both compared exactly on integers
    a = 1 + eps
    if s ** a.denominator < n ** a.numerator:
        return None
    two_mu = 2 * mu
    if s ** two_mu.denominator <= q ** two_mu.numerator:
        return None
    ratio = math.log2(s) / (float(mu) * math.log2(q)) - 1
    return max(1, min(n, _ceil_float(n / ratio)))


def counting_upper_ds(M: FieldMatrix, s: int, eps) -> LinearDS:
    """The partition data structure: t parts, every combination of each part stored.

    Parts smaller than ceil(n/t) are padded with zero cells so the space is
    exactly t * p^ceil(n/t). Cells of a part are ordered by coefficient vector.
    Falls back to the trivial (n, n) structure when the preconditions fail.
    """
    p, n = M.p, M.n
    t = counting_probe_count(n, s, eps, p)
    if t is None:
        return trivial_ds(M)
    width = -(-n // t)
    block = p**width
    parts = _parts(n, t)
    P = np.zeros((t * block, n), dtype=np.int64)
    for j, part in enumerate(parts):
        for c_idx, coeffs in enumerate(itertools.product(range(p), repeat=len(part))):
            P[j * block + c_idx, list(part)] = coeffs
    Q = np.zeros((M.m, t * block), dtype=np.int64)
    for i, row in enumerate(M.rows):
        for j, part in enumerate(parts):
            coeffs = [row[c] for c in part]
            if any(coeffs):
                Q[i, j * block + encode(coeffs, p)] = 1
    ds = LinearDS(FieldMatrix(P, p), FieldMatrix(Q, p), t)
    if not verify_ds(M, ds):
        raise AssertionError("counting data structure failed verification")
    return ds


@dataclass(frozen=True)
class CountingSearch:
    t_min_worst: int
    hardest: FieldMatrix
    histogram: dict[int, int]
    scanned: int


def min_probes(M: FieldMatrix, s: int, budget: int | None = None) -> int | None:
    """Least t admitting an (s, t) linear data structure, or None."""
    for t in range(0, M.n + 1):
        if not isinstance(outer_dimension(M, t, s, budget), AboveMax):
            return t
    return None


def counting_lower_search(p: int, n: int, m: int, s: int, budget: int | None = None, threads: int = 1) -> CountingSearch:
    """Worst case over every M in GF(p)^(m x n) of the least feasible t."""
    check_prime(p)
    if s < min(m, n):
        raise PreconditionViolated(f"s = {s} < min(m, n): full-rank targets admit no structure at all")
    total = p ** (n * m)
    charge("counting_lower_search", total, budget)
    cache: dict[tuple[int, ...], int] = {}

    def solve(index: int) -> int:
        M = FieldMatrix.from_rows([decode(x, p, n) for x in _split(index, p**n, m)], p, n=n)
        key = span_key(M.cols, p, m)
        if key not in cache:
            cache[key] = min_probes(M, s, budget)
        return cache[key]

    values = parallel_map(solve, range(total), threads)
    hist: dict[int, int] = {}
    for v in values:
        hist[v] = hist.get(v, 0) + 1
    worst = max(values)
    first = values.index(worst)
    hardest = FieldMatrix.from_rows([decode(x, p, n) for x in _split(first, p**n, m)], p, n=n)
    return CountingSearch(worst, hardest, dict(sorted(hist.items())), total)


def _split(index: int, base: int, count: int) -> list[int]:
    out = []
    for _ in range(count):
        index, r = divmod(index, base)
        out.append(r)
    return out[::-1]

