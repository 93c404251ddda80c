"""Rigid-submatrix extraction with exhaustive inner-dimension oracles.

Each round either certifies that the current column block M_i has small inner
dimension (it is strongly row rigid, so we stop) or peels off a t-sparse part:

    M_i = A_i B_i + M_{i+1} C_i

where M_{i+1} is a set of columns of M_i. If every round peels, the pieces
telescope into one sparse factorisation M = A B, which is a cheap linear data
structure for M. Every identity is re-multiplied and checked as it is built.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ._util import as_fraction, ceil_frac
from .dims import DimWitness, SparseGenerator, inner_dimension
from .errors import BudgetExceeded, InnerTooSmall, InternalVerificationFailed, PreconditionViolated
from .gfmat import FieldMatrix, extend_to_basis, hstack, solve_right, vstack
from .rigidity import StrongRigidity, strong_row_rigidity


@dataclass(frozen=True)
class Decomposition:
    """M = A B + Mprime C with A t-row-sparse and Mprime a column subset of M."""

    A: FieldMatrix
    B: FieldMatrix
    Mprime: FieldMatrix
    C: FieldMatrix
    source_columns: tuple[int, ...]
    t: int
    k: int
    inner: DimWitness

    def product(self) -> FieldMatrix:
        return self.A @ self.B + self.Mprime @ self.C


@dataclass(frozen=True)
class RigidSubmatrix:
    Mi: FieldMatrix
    iteration: int
    n_i: int
    r_i: int
    t: int
    columns: tuple[int, ...]
    inner_cert: DimWitness
    certification: StrongRigidity | None = None
    certified_by: str = "inner_dim"
    per_iteration: tuple[Decomposition, ...] = ()

    @property
    def rank(self) -> int:
        return self.Mi.rank()


@dataclass(frozen=True)
class Cover:
    A: SparseGenerator
    B: FieldMatrix
    total_sparsity: int
    sparsity_bound: int
    total_space: int
    space_bound: int
    widths: tuple[int, ...]
    per_iteration: tuple[Decomposition, ...] = field(default=())


def aux_decompose(M: FieldMatrix, t: int, k: int, budget: int | None = None) -> Decomposition:
    """Split M along a t-sparse subspace meeting colspace(M) in >= rank - k dims.

    Raises InnerTooSmall (carrying the inner-dimension certificate) when no
    such subspace exists.
    """
    w = inner_dimension(M, t, budget)
    rank = M.rank()
    if w.value < rank - k:
        raise InnerTooSmall(w, rank, k)
    G = w.witness.G
    A = hstack(G, FieldMatrix.zeros(M.m, M.n - G.n, M.p)) if G.n < M.n else G
    idx = extend_to_basis(A, M)
    Mprime = M.columns(idx)
    X = solve_right(hstack(A, Mprime), M)
    B = FieldMatrix(X.data[: A.n], M.p)
    C = FieldMatrix(X.data[A.n :].reshape(len(idx), M.n), M.p)
    dec = Decomposition(A, B, Mprime, C, tuple(idx), t, k, w)
    if dec.product() != M or A.row_sparsity() > t or len(idx) > k:
        raise InternalVerificationFailed("auxiliary decomposition does not reproduce M")
    return dec


def _certify(Mi: FieldMatrix, r: int, t: int, budget: int | None) -> tuple[StrongRigidity | None, str]:
    """Independent check by enumerating GL(n) when feasible."""
    if Mi.rank() == Mi.n and r >= 1:
        try:
            res = strong_row_rigidity(Mi, r, t, "gl_enum", budget)
        except BudgetExceeded:
            return None, "inner_dim"
        if not res.rigid:
            raise InternalVerificationFailed("inner-dimension test and GL enumeration disagree")
        return res, "gl_enum"
    return None, "inner_dim"


def _assemble(M: FieldMatrix, decs: list[Decomposition], last: FieldMatrix, t_seq: list[int], nominal: list[int]) -> Cover:
    p = M.p
    blocks = [d.A for d in decs] + [last]
    A = hstack(*blocks) if blocks else M
    D = []
    prod = FieldMatrix.identity(M.n, p)  # C_{i-1} ... C_0
    for d in decs:
        D.append(d.B @ prod)
        prod = d.C @ prod
    D.append(prod)
    B = vstack(*D)
    if A @ B != M:
        raise InternalVerificationFailed("telescoped factorisation A B != M")
    widths = tuple(b.n for b in blocks)
    sparsity = A.row_sparsity()
    bound = sum(t_seq[: len(decs)]) + last.n
    space_bound = sum(nominal)
    if sparsity > bound or A.n > space_bound:
        raise InternalVerificationFailed("cover exceeds its sparsity or space bound")
    return Cover(SparseGenerator(A, max(sparsity, 0)), B, sparsity, bound, A.n, space_bound, widths, tuple(decs))


def _run(M: FieldMatrix, r_seq: list[int], t_seq: list[int], budget: int | None, certify: bool):
    nominal = [M.n] + r_seq
    Mi = M
    cols = tuple(range(M.n))
    decs: list[Decomposition] = []
    for i, (r_i, t_i) in enumerate(zip(r_seq, t_seq)):
        w = inner_dimension(Mi, t_i, budget)
        if w.value < Mi.rank() - r_i:
            cert, by = _certify(Mi, r_i, t_i, budget) if certify else (None, "inner_dim")
            return RigidSubmatrix(Mi, i, nominal[i], r_i, t_i, cols, w, cert, by, tuple(decs))
        dec = aux_decompose(Mi, t_i, r_i, budget)
        decs.append(dec)
        cols = tuple(cols[j] for j in dec.source_columns)
        Mi = dec.Mprime
    return _assemble(M, decs, Mi, t_seq, nominal)


def run_schedule(M: FieldMatrix, r_seq, t_seq, budget: int | None = None, certify: bool = True):
    """Iteration i tests d(t_i) < rank - r_i, else peels with k = r_i.

    Nominal widths are n_0 = n and n_{i+1} = r_i; actual block widths can
    only be smaller.
    """
    r_seq, t_seq = [int(x) for x in r_seq], [int(x) for x in t_seq]
    if len(r_seq) != len(t_seq):
        raise PreconditionViolated("r and t schedules must have the same length")
    if any(a <= b for a, b in zip(r_seq, r_seq[1:])):
        raise PreconditionViolated("r schedule must be strictly decreasing")
    if any(x < 0 for x in r_seq + t_seq):
        raise PreconditionViolated("schedules must be non-negative")
    return _run(M, r_seq, t_seq, budget, certify)


def geometric_schedule(n: int, eps, k_iters: int) -> list[int]:
    """r_i = ceil(eps * n_i) with n_0 = n, n_{i+1} = r_i."""
    eps = as_fraction(eps)
    out, width = [], n
    for _ in range(k_iters):
        width = ceil_frac(eps * width)
        out.append(width)
    return out


def find_rigid_submatrix(M: FieldMatrix, eps, k_iters: int, t: int, budget: int | None = None, certify: bool = True):
    eps = as_fraction(eps)
    if not 0 < eps < 1:
        raise PreconditionViolated("need 0 < eps < 1")
    if k_iters < 0 or t < 0:
        raise PreconditionViolated("k_iters and t must be non-negative")
    # widths may stall at 1 for long runs, so the strict-decrease check of
    # user schedules does not apply here
    return _run(M, geometric_schedule(M.n, eps, k_iters), [t] * k_iters, budget, certify)


def iterations_for(n: int, t: int, eps) -> int:
    """Least k with eps^k * n <= t, i.e. ceil(log(n/t) / log(1/eps))."""
    eps = as_fraction(eps)
    k = 0
    while eps**k * n > t:
        k += 1
    return k


@dataclass(frozen=True)
class DSLowerOutcome:
    outcome: object
    k_iters: int
    implied_ds: tuple[int, int] | None  # (space, probes) when a Cover came back
    width_ok: bool | None  # n_i >= t on the rigid branch


def ds_lower_to_rigid(M: FieldMatrix, eps, t: int, budget: int | None = None) -> DSLowerOutcome:
    if not 1 <= t <= M.n:
        raise PreconditionViolated("need 1 <= t <= n")
    k = iterations_for(M.n, t, eps)
    out = find_rigid_submatrix(M, eps, k, t, budget)
    if isinstance(out, Cover):
        return DSLowerOutcome(out, k, (out.total_space, out.total_sparsity), None)
    return DSLowerOutcome(out, k, None, out.n_i >= t)


def succinct_schedule_run(M: FieldMatrix, r_seq, t_seq, budget: int | None = None):
    return run_schedule(M, r_seq, t_seq, budget)
