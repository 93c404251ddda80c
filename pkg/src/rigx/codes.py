"""Small linear codes and the strongly rigid matrices built from them.

Generators are stored column-wise: G is n_code x k_code and its columns are a
basis of the code, which is also the orientation used for rigidity tests.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from ._util import charge
from .errors import RankDeficient, UnsupportedKind
from .gfmat import FieldMatrix, vstack

KINDS = ("repetition_block", "hamming74", "extended_hamming84", "user_generator")

CATALOG = {
    "repetition_block": "each of k message symbols repeated in its own block (default k=2, block=4)",
    "hamming74": "binary [7,4,3] Hamming code, systematic generator",
    "extended_hamming84": "binary [8,4,4] Hamming code with an overall parity row",
    "user_generator": "any full-column-rank generator supplied by the caller",
}

_HAMMING_PARITY = ((1, 1, 0, 1), (1, 0, 1, 1), (0, 1, 1, 1))


@dataclass(frozen=True)
class CodeSpec:
    kind: str
    p: int
    G: FieldMatrix
    min_distance: int

    @property
    def n_code(self) -> int:
        return self.G.m

    @property
    def k_code(self) -> int:
        return self.G.n

    def codewords(self):
        for msg in itertools.product(range(self.p), repeat=self.k_code):
            yield self.G.apply(msg)


def minimum_distance(G: FieldMatrix, budget: int | None = None) -> int:
    """Least weight of a nonzero codeword, over all p^k - 1 messages."""
    k, p = G.n, G.p
    charge("minimum_distance", p**k, budget)
    if k == 0:
        return 0
    msgs = np.array(list(itertools.product(range(p), repeat=k))[1:], dtype=np.int64)
    words = np.mod(msgs @ G.data.T, p)
    return int(np.count_nonzero(words, axis=1).min())


def _hamming74() -> FieldMatrix:
    return FieldMatrix.from_rows([*np.eye(4, dtype=int).tolist(), *_HAMMING_PARITY], 2, n=4)


def build_code(kind: str, p: int = 2, *, k: int = 2, block: int = 4, G: FieldMatrix | None = None, budget: int | None = None) -> CodeSpec:
    if kind == "repetition_block":
        data = np.zeros((k * block, k), dtype=np.int64)
        for j in range(k):
            data[j * block : (j + 1) * block, j] = 1
        gen = FieldMatrix(data, p)
    elif kind in ("hamming74", "extended_hamming84"):
        if p != 2:
            raise UnsupportedKind(f"{kind} is only shipped over GF(2)")
        gen = _hamming74()
        if kind == "extended_hamming84":
            parity = FieldMatrix(np.mod(gen.data.sum(axis=0, keepdims=True), 2), 2)
            gen = vstack(gen, parity)
    elif kind == "user_generator":
        if G is None:
            raise ValueError("user_generator needs G")
        gen = G
        p = G.p
    else:
        raise UnsupportedKind(f"unknown code kind {kind!r}; choose from {KINDS}")
    if gen.rank() != gen.n:
        raise RankDeficient(f"generator has rank {gen.rank()} < {gen.n} columns")
    return CodeSpec(kind, p, gen, minimum_distance(gen, budget))


def friedman_matrix(code: CodeSpec) -> FieldMatrix:
    """The code basis as the columns of an n_code x k_code matrix."""
    return code.G
