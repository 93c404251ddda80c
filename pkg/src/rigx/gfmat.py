"""Exact linear algebra over small prime fields GF(p).

Matrices are immutable ``FieldMatrix`` values backed by read-only int64
arrays. Subspaces are ``SubspaceBasis`` values holding their reduced
row-echelon basis, so equal subspaces compare equal.

Hot loops elsewhere in the package work on *keys*: a subspace key is the
tuple of its RREF rows, each encoded as an integer in base ``p`` with the
first coordinate most significant. For p = 2 the encoding is the usual
bitmask and reduction runs on machine integers.
"""
from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from ._util import charge, gaussian_binomial
from .errors import DimensionMismatch, FormatError, NoSolution

PRIMES = (2, 3, 5, 7, 11, 13)

Vector = tuple[int, ...]


def check_prime(p: int) -> int:
    if p not in PRIMES:
        raise ValueError(f"p must be a prime in {PRIMES}, got {p!r}")
    return p


@lru_cache(maxsize=None)
def inverses(p: int) -> tuple[int, ...]:
    return (0,) + tuple(pow(a, p - 2, p) for a in range(1, p))


# ---------------------------------------------------------------------------
# list-level kernels


def rref_lists(rows: Iterable[Sequence[int]], p: int, ncols: int, pivot_limit: int | None = None):
    """Reduce ``rows`` in place-style; returns (rows, pivots).

    Pivots are only searched in columns ``< pivot_limit`` (default: all), which
    lets callers reduce an augmented system [A | Y] on the A block alone.
    """
    rows = [list(r) for r in rows]
    inv = inverses(p)
    limit = ncols if pivot_limit is None else pivot_limit
    pivots: list[int] = []
    r = 0
    nrows = len(rows)
    for c in range(limit):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        f = inv[rows[r][c]]
        if f != 1:
            rows[r] = [(x * f) % p for x in rows[r]]
        pr = rows[r]
        for i in range(nrows):
            g = rows[i][c]
            if i != r and g:
                rows[i] = [(x - g * y) % p for x, y in zip(rows[i], pr)]
        pivots.append(c)
        r += 1
    return rows, pivots


def encode(v: Sequence[int], p: int) -> int:
    x = 0
    for a in v:
        x = x * p + int(a)
    return x


def decode(x: int, p: int, length: int) -> Vector:
    out = [0] * length
    for i in range(length - 1, -1, -1):
        x, out[i] = divmod(x, p)
    return tuple(out)


def gf2_key(vectors: Iterable[int]) -> tuple[int, ...]:
    """Canonical RREF key of the span of GF(2) bitmask vectors."""
    basis: list[int] = []
    for v in vectors:
        for b in basis:
            if v ^ b < v:
                v ^= b
        if v:
            basis = [b ^ v if b ^ v < b else b for b in basis]
            basis.append(v)
            basis.sort(reverse=True)
    return tuple(basis)


def span_key(vectors: Iterable[Sequence[int]], p: int, length: int) -> tuple[int, ...]:
    if p == 2:
        return gf2_key(encode(v, 2) for v in vectors)
    rows = [list(v) for v in vectors]
    if not rows:
        return ()
    red, piv = rref_lists(rows, p, length)
    return tuple(encode(red[i], p) for i in range(len(piv)))


@lru_cache(maxsize=65536)
def key_members(key: tuple[int, ...], p: int, length: int) -> tuple[int, ...]:
    """Encoded members of the subspace, enumerated by coefficient vector."""
    if p == 2:
        members = [0]
        for b in key:
            members += [m ^ b for m in members]
        return tuple(members)
    basis = [decode(b, p, length) for b in key]
    members = [(0,) * length]
    for b in basis:
        members = [tuple((x + c * y) % p for x, y in zip(m, b)) for c in range(p) for m in members]
    return tuple(encode(m, p) for m in members)


@lru_cache(maxsize=65536)
def key_mask(key: tuple[int, ...], p: int, length: int) -> int:
    mask = 0
    for x in key_members(key, p, length):
        mask |= 1 << x
    return mask


@lru_cache(maxsize=None)
def _log_table(p: int, top: int) -> dict[int, int]:
    return {p**d: d for d in range(top + 1)}


def mask_dim(mask: int, p: int, length: int) -> int:
    """Dimension of a subspace from the popcount of its member mask."""
    return _log_table(p, length)[mask.bit_count()]


def hamming(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(1 for a, b in zip(u, v) if a != b)


def encoded_distance(x: int, y: int, p: int, length: int) -> int:
    if p == 2:
        return (x ^ y).bit_count()
    d = 0
    for _ in range(length):
        x, a = divmod(x, p)
        y, b = divmod(y, p)
        d += a != b
    return d


# ---------------------------------------------------------------------------
# FieldMatrix


@dataclass(frozen=True, eq=False)
class FieldMatrix:
    """Dense matrix over GF(p) with entries in [0, p)."""

    data: np.ndarray
    p: int = 2

    def __post_init__(self):
        check_prime(self.p)
        arr = np.asarray(self.data)
        if arr.size == 0 and arr.ndim < 2:
            arr = arr.reshape(0, 0)
        if arr.ndim != 2:
            raise DimensionMismatch(f"expected a 2-d array, got shape {arr.shape}")
        if arr.size and (not np.issubdtype(arr.dtype, np.integer) and not np.all(np.mod(arr, 1) == 0)):
            raise ValueError("entries must be integers")
        arr = np.array(arr, dtype=np.int64)
        if arr.size and (arr.min() < 0 or arr.max() >= self.p):
            raise ValueError(f"entries must lie in [0, {self.p})")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    # construction ---------------------------------------------------------

    @classmethod
    def reduce(cls, data, p: int = 2) -> "FieldMatrix":
        """Build from arbitrary integers, reducing mod p."""
        arr = np.asarray(data, dtype=np.int64)
        if arr.size == 0 and arr.ndim < 2:
            arr = arr.reshape(0, 0)
        return cls(np.mod(arr, p), p)

    @classmethod
    def zeros(cls, m: int, n: int, p: int = 2) -> "FieldMatrix":
        return cls(np.zeros((m, n), dtype=np.int64), p)

    @classmethod
    def identity(cls, n: int, p: int = 2) -> "FieldMatrix":
        return cls(np.eye(n, dtype=np.int64), p)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], p: int = 2, n: int | None = None) -> "FieldMatrix":
        rows = list(rows)
        if not rows:
            return cls.zeros(0, n or 0, p)
        return cls(np.array(rows, dtype=np.int64).reshape(len(rows), -1 if n is None else n), p)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence[int]], m: int, p: int = 2) -> "FieldMatrix":
        if not cols:
            return cls.zeros(m, 0, p)
        return cls(np.array(cols, dtype=np.int64).reshape(len(cols), m).T, p)

    # shape & views --------------------------------------------------------

    @property
    def m(self) -> int:
        return self.data.shape[0]

    @property
    def n(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    @cached_property
    def rows(self) -> tuple[Vector, ...]:
        return tuple(tuple(int(x) for x in r) for r in self.data)

    @cached_property
    def cols(self) -> tuple[Vector, ...]:
        return tuple(tuple(int(x) for x in c) for c in self.data.T)

    @cached_property
    def key(self) -> tuple[int, ...]:
        """Row-major entries; the package-wide lexicographic order."""
        return tuple(int(x) for x in self.data.ravel())

    @property
    def T(self) -> "FieldMatrix":
        return FieldMatrix(self.data.T, self.p)

    def columns(self, idx: Sequence[int]) -> "FieldMatrix":
        return FieldMatrix(self.data[:, list(idx)].reshape(self.m, len(idx)), self.p)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        return self.p == other.p and self.shape == other.shape and np.array_equal(self.data, other.data)

    def __hash__(self) -> int:
        return hash((self.p, self.shape, self.key))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(map(str, r)) for r in self.rows)
        return f"FieldMatrix(p={self.p}, {self.m}x{self.n}, [{body}])"

    # arithmetic -----------------------------------------------------------

    def _check_same(self, other: "FieldMatrix") -> None:
        if not isinstance(other, FieldMatrix):
            raise TypeError(f"expected FieldMatrix, got {type(other).__name__}")
        if other.p != self.p:
            raise DimensionMismatch(f"field mismatch: GF({self.p}) vs GF({other.p})")

    def __matmul__(self, other: "FieldMatrix") -> "FieldMatrix":
        self._check_same(other)
        if self.n != other.m:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        return FieldMatrix(np.mod(self.data @ other.data, self.p), self.p)

    def __add__(self, other: "FieldMatrix") -> "FieldMatrix":
        self._check_same(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot add {self.shape} and {other.shape}")
        return FieldMatrix(np.mod(self.data + other.data, self.p), self.p)

    def __sub__(self, other: "FieldMatrix") -> "FieldMatrix":
        self._check_same(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot subtract {other.shape} from {self.shape}")
        return FieldMatrix(np.mod(self.data - other.data, self.p), self.p)

    def __neg__(self) -> "FieldMatrix":
        return FieldMatrix(np.mod(-self.data, self.p), self.p)

    def apply(self, x: Sequence[int]) -> Vector:
        """Matrix-vector product."""
        if len(x) != self.n:
            raise DimensionMismatch(f"vector of length {len(x)} for {self.shape} matrix")
        return tuple(int(v) for v in np.mod(self.data @ np.asarray(x, dtype=np.int64), self.p))

    # linear algebra -------------------------------------------------------

    @cached_property
    def _rref(self):
        red, piv = rref_lists(self.rows, self.p, self.n)
        return red, piv

    def rank(self) -> int:
        return len(self._rref[1])

    def row_sparsity(self) -> int:
        """Largest number of nonzeros in any row."""
        if self.n == 0 or self.m == 0:
            return 0
        return int(np.count_nonzero(self.data, axis=1).max())

    def colspace(self) -> "SubspaceBasis":
        return SubspaceBasis.span(self.cols, self.p, self.m)

    def rowspace(self) -> "SubspaceBasis":
        return SubspaceBasis.span(self.rows, self.p, self.n)

    # text format ----------------------------------------------------------

    def to_text(self) -> str:
        lines = [f"gfmat 1 p={self.p} m={self.m} n={self.n}"]
        lines += [" ".join(str(x) for x in r) for r in self.rows]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "FieldMatrix":
        lines = text.split("\n")
        if lines and lines[-1] == "":
            lines.pop()
        if not lines:
            raise FormatError("empty matrix text")
        p, m, n = _parse_header(lines[0], "gfmat", ("p", "m", "n"))
        body = lines[1:]
        if len(body) != m:
            raise FormatError(f"expected {m} rows, found {len(body)}")
        return cls(_parse_block(body, n, p), p)

    def digest(self) -> str:
        return hashlib.sha256(self.to_text().encode()).hexdigest()


def _parse_header(line: str, magic: str, fields: Sequence[str]) -> tuple[int, ...]:
    parts = line.split(" ")
    if len(parts) != 2 + len(fields) or parts[0] != magic or parts[1] != "1":
        raise FormatError(f"bad header {line!r}")
    values = []
    for part, name in zip(parts[2:], fields):
        key, sep, val = part.partition("=")
        if key != name or not sep or not val.isdigit():
            raise FormatError(f"bad header field {part!r}, expected {name}=<int>")
        values.append(int(val))
    if values[0] not in PRIMES:
        raise FormatError(f"unsupported modulus p={values[0]}")
    return tuple(values)


def _parse_block(lines: Sequence[str], n: int, p: int) -> np.ndarray:
    out = np.zeros((len(lines), n), dtype=np.int64)
    for i, line in enumerate(lines):
        if line != line.strip() or "\r" in line:
            raise FormatError(f"row {i}: stray whitespace")
        tokens = line.split(" ") if line else []
        if len(tokens) != n:
            raise FormatError(f"row {i}: expected {n} entries, found {len(tokens)}")
        for j, tok in enumerate(tokens):
            if not tok.isdigit():
                raise FormatError(f"row {i}: bad entry {tok!r}")
            v = int(tok)
            if v >= p:
                raise FormatError(f"row {i}: entry {v} out of range for p={p}")
            out[i, j] = v
    return out


def hstack(*mats: FieldMatrix) -> FieldMatrix:
    p = mats[0].p
    m = mats[0].m
    for M in mats:
        if M.p != p or M.m != m:
            raise DimensionMismatch("hstack needs equal row counts and fields")
    return FieldMatrix(np.hstack([M.data for M in mats]).reshape(m, -1), p)


def vstack(*mats: FieldMatrix) -> FieldMatrix:
    p = mats[0].p
    n = mats[0].n
    for M in mats:
        if M.p != p or M.n != n:
            raise DimensionMismatch("vstack needs equal column counts and fields")
    return FieldMatrix(np.vstack([M.data for M in mats]).reshape(-1, n), p)


# ---------------------------------------------------------------------------
# SubspaceBasis


@dataclass(frozen=True)
class SubspaceBasis:
    """Subspace of GF(p)^ambient held as its RREF basis."""

    p: int
    ambient: int
    basis: tuple[Vector, ...]

    def __post_init__(self):
        check_prime(self.p)
        basis = tuple(tuple(int(x) for x in b) for b in self.basis)
        if any(len(b) != self.ambient for b in basis):
            raise DimensionMismatch("basis vectors must have length `ambient`")
        canon = self.from_key(span_key(basis, self.p, self.ambient), self.p, self.ambient).basis
        if canon != basis:
            raise ValueError("basis is not in reduced row-echelon form")
        object.__setattr__(self, "basis", basis)

    @classmethod
    def from_key(cls, key: tuple[int, ...], p: int, ambient: int) -> "SubspaceBasis":
        obj = object.__new__(cls)
        object.__setattr__(obj, "p", p)
        object.__setattr__(obj, "ambient", ambient)
        object.__setattr__(obj, "basis", tuple(decode(b, p, ambient) for b in key))
        return obj

    @classmethod
    def span(cls, vectors: Iterable[Sequence[int]], p: int, ambient: int) -> "SubspaceBasis":
        return cls.from_key(span_key(list(vectors), p, ambient), p, ambient)

    @classmethod
    def zero(cls, ambient: int, p: int = 2) -> "SubspaceBasis":
        return cls.from_key((), p, ambient)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @cached_property
    def key(self) -> tuple[int, ...]:
        return tuple(encode(b, self.p) for b in self.basis)

    @property
    def mask(self) -> int:
        return key_mask(self.key, self.p, self.ambient)

    def members(self) -> list[Vector]:
        return [decode(x, self.p, self.ambient) for x in key_members(self.key, self.p, self.ambient)]

    def __contains__(self, v: Sequence[int]) -> bool:
        return span_key([*self.basis, v], self.p, self.ambient) == self.key

    def contains_subspace(self, other: "SubspaceBasis") -> bool:
        return all(v in self for v in other.basis)

    def __add__(self, other: "SubspaceBasis") -> "SubspaceBasis":
        return SubspaceBasis.span([*self.basis, *other.basis], self.p, self.ambient)

    def intersect(self, other: "SubspaceBasis") -> "SubspaceBasis":
        common = [v for v in self.members() if v in other]
        return SubspaceBasis.span(common, self.p, self.ambient)

    @property
    def matrix(self) -> FieldMatrix:
        """Basis as a dim x ambient matrix."""
        return FieldMatrix.from_rows(self.basis, self.p, n=self.ambient)

    def __repr__(self) -> str:
        body = ", ".join("(" + ",".join(map(str, b)) + ")" for b in self.basis)
        return f"span{{{body}}} <= GF({self.p})^{self.ambient}"


# ---------------------------------------------------------------------------
# operations


def rref(M: FieldMatrix) -> tuple[FieldMatrix, int, list[int]]:
    """Reduced row-echelon form, rank and pivot columns."""
    red, piv = M._rref
    return FieldMatrix.from_rows(red, M.p, n=M.n) if M.m else M, len(piv), list(piv)


def _kernel_rref(red: list[list[int]], pivots: list[int], k: int, p: int) -> tuple[list[list[int]], list[int]]:
    free = [c for c in range(k) if c not in pivots]
    kernel = []
    for f in free:
        v = [0] * k
        v[f] = 1
        for r, c in enumerate(pivots):
            v[c] = (-red[r][f]) % p
        kernel.append(v)
    if not kernel:
        return [], []
    return rref_lists(kernel, p, k)


def kernel_basis(M: FieldMatrix) -> FieldMatrix:
    """Rows form the RREF basis of {x : M x = 0}."""
    red, piv = M._rref
    ker, _ = _kernel_rref([row for row in red[: len(piv)]], piv, M.n, M.p)
    return FieldMatrix.from_rows(ker, M.p, n=M.n)


def solve_right(A: FieldMatrix, Y: FieldMatrix) -> FieldMatrix:
    """Lexicographically least X with A X = Y.

    Raises NoSolution naming the first column of Y outside colspace(A).
    """
    if A.p != Y.p:
        raise DimensionMismatch("field mismatch")
    if A.m != Y.m:
        raise DimensionMismatch(f"A has {A.m} rows but Y has {Y.m}")
    p, k = A.p, A.n
    aug = [list(a) + list(y) for a, y in zip(A.rows, Y.rows)]
    red, pivots = rref_lists(aug, p, k + Y.n, pivot_limit=k)
    rank = len(pivots)
    ker, kpiv = _kernel_rref([row[:k] for row in red[:rank]], pivots, k, p)
    X = np.zeros((k, Y.n), dtype=np.int64)
    for j in range(Y.n):
        if any(red[r][k + j] for r in range(rank, A.m)):
            raise NoSolution(j)
        x = [0] * k
        for r, c in enumerate(pivots):
            x[c] = red[r][k + j]
        # reduce by the kernel's RREF: zeros at its pivots give the lex-least point
        for row, c in zip(ker, kpiv):
            if x[c]:
                g = x[c]
                x = [(a - g * b) % p for a, b in zip(x, row)]
        X[:, j] = x
    return FieldMatrix(X, p)


class Echelon:
    """Incrementally maintained echelon basis (for greedy extension)."""

    def __init__(self, p: int, length: int):
        self.p = p
        self.length = length
        self.rows: list[list[int]] = []
        self.pivots: list[int] = []

    def reduce(self, v: Sequence[int]) -> list[int]:
        v = list(v)
        p = self.p
        for row, c in zip(self.rows, self.pivots):
            g = v[c]
            if g:
                v = [(a - g * b) % p for a, b in zip(v, row)]
        return v

    def add(self, v: Sequence[int]) -> bool:
        """Add v; returns False if it was already in the span."""
        v = self.reduce(v)
        c = next((i for i, a in enumerate(v) if a), None)
        if c is None:
            return False
        inv = inverses(self.p)[v[c]]
        v = [(a * inv) % self.p for a in v]
        self.rows.append(v)
        self.pivots.append(c)
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)


def extend_to_basis(partial: FieldMatrix, target: FieldMatrix) -> list[int]:
    """Greedy, first-index-wins choice of target columns completing the span."""
    if partial.m != target.m or partial.p != target.p:
        raise DimensionMismatch("partial and target must share rows and field")
    ech = Echelon(target.p, target.m)
    for c in partial.cols:
        ech.add(c)
    return [j for j, c in enumerate(target.cols) if ech.add(c)]


@lru_cache(maxsize=4096)
def subspace_keys(ambient: int, dim: int, p: int) -> tuple[tuple[int, ...], ...]:
    """Keys of all dim-dimensional subspaces, in canonical enumeration order."""
    out = []
    for pivots in itertools.combinations(range(ambient), dim):
        slots = [(r, j) for r, c in enumerate(pivots) for j in range(c + 1, ambient) if j not in pivots]
        for values in itertools.product(range(p), repeat=len(slots)):
            rows = [[0] * ambient for _ in range(dim)]
            for r, c in enumerate(pivots):
                rows[r][c] = 1
            for (r, j), v in zip(slots, values):
                rows[r][j] = v
            out.append(tuple(encode(row, p) for row in rows))
    return tuple(out)


def enumerate_subspaces(ambient: int, dim: int, p: int = 2, budget: int | None = None) -> Iterator[SubspaceBasis]:
    """Every dim-dimensional subspace of GF(p)^ambient exactly once.

    Order: pivot sets lexicographically, then free entries lexicographically.
    """
    check_prime(p)
    if not 0 <= dim <= ambient:
        raise ValueError(f"need 0 <= dim <= ambient, got dim={dim}, ambient={ambient}")
    charge("enumerate_subspaces", gaussian_binomial(ambient, dim, p), budget)
    for key in subspace_keys(ambient, dim, p):
        yield SubspaceBasis.from_key(key, p, ambient)


def distance_to_subspace(v: Sequence[int], L: SubspaceBasis, budget: int | None = None) -> int:
    """Hamming distance from v to the nearest member of L (exhaustive)."""
    if len(v) != L.ambient:
        raise DimensionMismatch(f"vector length {len(v)} vs ambient {L.ambient}")
    charge("distance_to_subspace", L.p**L.dim, budget)
    x = encode(v, L.p)
    return min(encoded_distance(x, u, L.p, L.ambient) for u in key_members(L.key, L.p, L.ambient))


def read_matrix(path) -> FieldMatrix:
    with open(path, encoding="ascii", newline="") as fh:
        return FieldMatrix.from_text(fh.read())


def write_matrix(M: FieldMatrix, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(M.to_text())
