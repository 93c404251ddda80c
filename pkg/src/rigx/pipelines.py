"""End-to-end implication chains, with every intermediate certificate re-checked.

ds_to_square: a matrix without a cheap linear data structure yields a rigid
column block, its LDC encoding is globally rigid, and side-by-side copies of
the encoding make a square globally rigid matrix.

rigid_to_ds_lb: strong row rigidity (small inner dimension) forces a large
outer dimension, which is a data structure space lower bound.
"""
from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass

from .amplify import LinearLDC, apply_ldc, global_bound, hadamard_ldc, square_up
from .dims import AboveMax, DimWitness, check_witness, inner_dimension, outer_dimension
from .errors import BudgetExceeded, DimensionMismatch, InternalVerificationFailed
from .extract import Cover, DSLowerOutcome, RigidSubmatrix, ds_lower_to_rigid
from .gfmat import FieldMatrix
from .rigidity import RigidityCertificate, StrongRigidity, global_rigidity_threshold, row_rigidity_threshold, strong_row_rigidity


@contextmanager
def stage(name: str):
    """Prefix budget failures with the pipeline stage that hit them."""
    try:
        yield
    except BudgetExceeded as exc:
        raise BudgetExceeded(f"{name}/{exc.operation}", exc.count, exc.budget) from exc


@dataclass(frozen=True)
class SquareRigidResult:
    branch: str  # "Cover" or "Rigid"
    extraction: DSLowerOutcome
    r: int | None = None
    row_cert: RigidityCertificate | None = None
    ldc: LinearLDC | None = None
    encoded_global: RigidityCertificate | None = None
    global_lower: int | None = None
    square: FieldMatrix | None = None
    copies: int | None = None
    square_threshold: int | None = None


def pipeline_ds_to_square_rigid(M: FieldMatrix, eps, t: int, ldc_k: int | None = None, r: int | None = None, budget: int | None = None) -> SquareRigidResult:
    with stage("extract"):
        ext = ds_lower_to_rigid(M, eps, t, budget)
    out = ext.outcome
    if isinstance(out, Cover):
        if out.A.G @ out.B != M:
            raise InternalVerificationFailed("cover does not factor M")
        return SquareRigidResult("Cover", ext)
    assert isinstance(out, RigidSubmatrix)
    Mi = out.Mi
    r = out.r_i if r is None else r
    with stage("row_threshold"):
        row = row_rigidity_threshold(Mi, r, budget)
    if r == out.r_i and not row.is_rigid(out.t):
        # strong rigidity at (r_i, t) includes T = I
        raise InternalVerificationFailed("extracted block is not row rigid at its own parameters")
    k = Mi.m if ldc_k is None else ldc_k
    if k != Mi.m:
        raise DimensionMismatch(f"hadamard:{k} encodes length-{k} columns, the block has {Mi.m} rows")
    with stage("ldc"):
        ldc = hadamard_ldc(k, budget=budget)
    EM = apply_ldc(ldc, Mi)
    with stage("global_threshold"):
        g = global_rigidity_threshold(EM, r, budget)
    lower = global_bound(ldc, row.threshold)
    if not g.threshold > lower:
        raise InternalVerificationFailed(f"encoded global threshold {g.threshold} <= {lower}")
    S, copies = square_up(EM)
    if S.rank() != EM.rank():
        raise InternalVerificationFailed("squaring changed the rank")
    # thresholds add over side-by-side copies and zero columns cost nothing
    return SquareRigidResult("Rigid", ext, r, row, ldc, g, lower, S, copies, copies * g.threshold)


@dataclass(frozen=True)
class DSLowerBoundResult:
    hypothesis: bool
    r: int
    t: int
    s_max: int
    strong: StrongRigidity | None = None
    outer: AboveMax | DimWitness | None = None
    inner_value: int | None = None
    reason: str = ""


def pipeline_rigid_to_ds_lb(M: FieldMatrix, r: int, t: int, budget: int | None = None) -> DSLowerBoundResult:
    n = M.n
    s_max = n + r - 1
    if M.rank() != n:
        return DSLowerBoundResult(False, r, t, s_max, reason="M lacks full column rank")
    with stage("strong_rigidity"):
        strong = strong_row_rigidity(M, r, t, "inner_dim", budget)
    if not strong.rigid:
        return DSLowerBoundResult(False, r, t, s_max, strong, inner_value=strong.inner.value, reason="not strongly row rigid")
    if not check_witness(M, strong.inner):
        raise InternalVerificationFailed("inner-dimension witness failed re-verification")
    with stage("outer_dimension"):
        outer = outer_dimension(M, t, s_max, budget)
    if not isinstance(outer, AboveMax):
        raise InternalVerificationFailed(f"found a {outer.value}-cell cover below the forced bound {n + r}")
    d = inner_dimension(M, t, budget).value
    # d + D >= 2n with d <= n - r gives D >= n + r > s_max
    if d > n - r:
        raise InternalVerificationFailed("inner dimension above n - r on the rigid branch")
    return DSLowerBoundResult(True, r, t, s_max, strong, outer, d)
