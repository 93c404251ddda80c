"""Exhaustive acceptance sweeps.

Each criterion function returns a JSON-ready dict with a "passed" flag and
the counts behind it. Nothing in a report depends on timing or on the number
of worker threads, so reports can be compared byte for byte.
"""
from __future__ import annotations

import hashlib
import itertools
import math
from fractions import Fraction

import numpy as np

from . import dims, dscore, gfmat, rigidity
from ._util import parallel_map
from .amplify import apply_ldc, global_bound, hadamard_ldc, stack_square
from .codes import build_code, friedman_matrix
from .dims import AboveMax, SparseGenerator, check_witness, dimension_inequality, generator_at, outer_dimension, sparse_table
from .dscore import SumsetWitness, counting_lower_search, counting_upper_ds, ds_from_cover, linearize, sumset_evasive_bruteforce, verify_ds
from .errors import NotACover, NotComputingM
from .extract import Cover, RigidSubmatrix, find_rigid_submatrix, geometric_schedule
from .fixtures import COUNTING_LOWER_2_3_4_3, rigid_fixture
from .gfmat import FieldMatrix, hstack, kernel_basis
from .report import to_jsonable
from .rigidity import (
    _gl_images,
    global_rigidity_threshold,
    refutation_inner_dim_check,
    reconstruct,
    row_rigidity_threshold,
    strong_row_rigidity,
    strong_threshold,
)

SEED = 20240601


def all_matrices(m: int, n: int, p: int = 2):
    """Every m x n matrix over GF(p), row-major lexicographic."""
    for flat in itertools.product(range(p), repeat=m * n):
        yield FieldMatrix(np.array(flat, dtype=np.int64).reshape(m, n), p)


def full_rank(m: int, n: int, p: int = 2) -> list[FieldMatrix]:
    return [M for M in all_matrices(m, n, p) if M.rank() == n]


def _digest(values) -> str:
    return hashlib.sha256(repr(values).encode()).hexdigest()[:16]


def clear_caches() -> None:
    """Drop every memo table so a rerun recomputes from scratch."""
    for mod in (gfmat, dims, rigidity, dscore):
        for obj in vars(mod).values():
            if hasattr(obj, "cache_clear"):
                obj.cache_clear()
    _COVER_INDEX.clear()


# ---------------------------------------------------------------------------
# 1. outer dimension <= s  <=>  non-evasive  <=>  a sparse cover gives a DS

_COVER_INDEX: dict = {}


def _first_ds_cover(M: FieldMatrix, s: int, t: int):
    """First enumerated t-sparse m x s generator that ds_from_cover accepts."""
    key = (M.colspace().key, s, t)
    if key not in _COVER_INDEX:
        table = sparse_table(M.m, s, t, M.p)
        found = None
        for first in table.first:
            gen = SparseGenerator(generator_at(first, M.m, s, t, M.p), t)
            try:
                ds_from_cover(M, gen)
            except NotACover:
                continue
            found = first
            break
        _COVER_INDEX[key] = found
    first = _COVER_INDEX[key]
    if first is None:
        return None
    return ds_from_cover(M, SparseGenerator(generator_at(first, M.m, s, t, M.p), t))


def criterion1(threads: int = 1) -> dict:
    mats = list(all_matrices(4, 3))
    cases = disagreements = invalid = 0
    tally = {}
    for s in (2, 3, 4):
        for t in (1, 2):

            def one(M, s=s, t=t):
                a = not isinstance(outer_dimension(M, t, s), AboveMax)
                b = isinstance(sumset_evasive_bruteforce(M.rows, s, t, 2, n=3), SumsetWitness)
                ds = _first_ds_cover(M, s, t)
                c = ds is not None
                bad = c and not (verify_ds(M, ds).valid and ds.s == s and ds.t == t)
                return a, b, c, bad

            res = parallel_map(one, mats, threads)
            cases += len(res)
            disagreements += sum(1 for a, b, c, _ in res if not a == b == c)
            invalid += sum(1 for *_, bad in res if bad)
            tally[f"s={s},t={t}"] = sum(1 for a, *_ in res if a)
    return {
        "criterion": 1,
        "cases": cases,
        "disagreements": disagreements,
        "invalid_ds": invalid,
        "feasible_counts": tally,
        "passed": cases == 4096 * 6 and disagreements == 0 and invalid == 0,
    }


# ---------------------------------------------------------------------------
# 2. d_V(t) + D_V(t) >= 2 dim V


def criterion2(threads: int = 1) -> dict:
    rng = np.random.default_rng(SEED)
    families = {
        "gf2_3x2": list(all_matrices(3, 2)),
        "gf2_4x2": list(all_matrices(4, 2)),
        "gf3_4x2_random": [FieldMatrix(rng.integers(0, 3, size=(4, 2)), 3) for _ in range(500)],
    }
    out = {"criterion": 2}
    total_viol = 0
    for name, mats in families.items():
        for t in (1, 2):

            def one(M, t=t):
                d, D, two_r = dimension_inequality(M, t)
                wit_ok = check_witness(M, dims.inner_dimension(M, t))
                return d, D, two_r, wit_ok

            res = parallel_map(one, mats, threads)
            viol = sum(1 for d, D, tr, ok in res if d + D < tr or not ok)
            total_viol += viol
            out[f"{name}_t{t}"] = {
                "cases": len(res),
                "violations": viol,
                "min_slack": min(d + D - tr for d, D, tr, _ in res),
                "digest": _digest([(d, D) for d, D, _, _ in res]),
            }
    out["violations"] = total_viol
    out["passed"] = total_viol == 0
    return out


# ---------------------------------------------------------------------------
# 3. inner-dimension test == GL enumeration (== sum-cover on 3x2), with
#    refutation harvesting for criterion 9


def _criterion3_core(threads: int):
    fams = {"3x2": full_rank(3, 2), "4x3": full_rank(4, 3)}
    out = {"criterion": 3}
    harvest = []
    total_dis = 0
    for name, mats in fams.items():

        def one(M, name=name):
            rows = []
            for r in (1, 2):
                strong = strong_threshold(M, r)
                row = row_rigidity_threshold(M, r)
                for t in (1, 2):
                    inner = strong_row_rigidity(M, r, t, "inner_dim").rigid
                    gl = strong.is_rigid(t)
                    sc = strong_row_rigidity(M, r, t, "sum_cover").rigid if name == "3x2" else gl
                    implies_row = (not gl) or row.is_rigid(t)
                    wit = []
                    if not row.is_rigid(t):
                        A, B = reconstruct(M, row.refuting_L)
                        wit.append((M, A, B, r, t))
                    if not gl:
                        MT = M @ strong.refuting_T
                        A, B = reconstruct(MT, strong.refuting_L)
                        wit.append((MT, A, B, r, t))
                    rows.append((inner, gl, sc, implies_row, wit))
            return rows

        res = parallel_map(one, mats, threads)
        flat = [x for per in res for x in per]
        dis = sum(1 for inner, gl, sc, _, _ in flat if not inner == gl == sc)
        no_row = sum(1 for *_, ok, _ in flat if not ok)
        total_dis += dis + no_row
        for *_, wit in flat:
            harvest.extend(wit)
        out[name] = {
            "matrices": len(mats),
            "cases": len(flat),
            "rigid": sum(1 for _, gl, *_ in flat if gl),
            "disagreements": dis,
            "strong_without_row": no_row,
            "sum_cover_checked": name == "3x2",
        }
    out["refutations_harvested"] = len(harvest)
    out["passed"] = total_dis == 0 and len(fams["3x2"]) == 42 and len(fams["4x3"]) == 2520
    return out, harvest


def criterion3(threads: int = 1) -> dict:
    return _criterion3_core(threads)[0]


# ---------------------------------------------------------------------------
# 4. extraction soundness on every full-rank 5x3


def _check_extraction(M: FieldMatrix, eps, k: int, t: int) -> tuple[str, bool, bool]:
    out = find_rigid_submatrix(M, eps, k, t)
    widths = [M.n] + geometric_schedule(M.n, eps, k)
    n_k = widths[-1]
    if isinstance(out, Cover):
        ok = (
            out.A.G @ out.B == M
            and out.total_sparsity <= t * k + n_k
            and out.total_space <= sum(widths)
            and out.A.G.row_sparsity() == out.total_sparsity
        )
        kind = "Cover"
    else:
        sub = M.columns(list(out.columns))
        cert = strong_row_rigidity(out.Mi, out.r_i, out.t, "gl_enum") if out.Mi.rank() == out.Mi.n else None
        ok = sub == out.Mi and out.inner_cert.value < out.Mi.rank() - out.r_i and (cert is None or cert.rigid)
        kind = "RigidSubmatrix"
    premise = isinstance(outer_dimension(M, t * k + n_k, math.ceil(Fraction(M.n) / (1 - Fraction(eps)))), AboveMax)
    return kind, ok, (not premise) or kind == "RigidSubmatrix"


def criterion4(threads: int = 1) -> dict:
    mats = full_rank(5, 3)
    out = {"criterion": 4, "matrices": len(mats)}
    bad = 0
    for k in (1, 2):
        res = parallel_map(lambda M, k=k: _check_extraction(M, Fraction(1, 2), k, 1), mats, threads)
        unsound = sum(1 for _, ok, _ in res if not ok)
        broken = sum(1 for *_, th in res if not th)
        bad += unsound + broken
        out[f"k={k}"] = {
            "cover": sum(1 for kind, *_ in res if kind == "Cover"),
            "rigid": sum(1 for kind, *_ in res if kind == "RigidSubmatrix"),
            "unsound": unsound,
            "premise_without_rigid": broken,
        }
    out["passed"] = bad == 0 and len(mats) == 26040
    return out


# ---------------------------------------------------------------------------
# 5. LDC encoding turns row rigidity into global rigidity


def _ldc_fixtures() -> list[tuple[str, FieldMatrix]]:
    fx = [(f"fr2x2_{i}", M) for i, M in enumerate(full_rank(2, 2))]
    fx += [(f"fr3x2_{i}", M) for i, M in enumerate(full_rank(3, 2))]
    fx += [(f"fr3x3_{i}", M) for i, M in enumerate(full_rank(3, 3))]
    fx.append(("rigid_fixture", rigid_fixture()))
    for kind in ("hamming74", "extended_hamming84", "repetition_block"):
        fx.append((f"friedman_{kind}", friedman_matrix(build_code(kind))))
    return fx


def criterion5(threads: int = 1) -> dict:
    fixtures = _ldc_fixtures()

    def one(item):
        name, M = item
        ldc = hadamard_ldc(M.m)
        EM = apply_ldc(ldc, M)
        rows = []
        for r in range(1, M.n + 1):
            tau = row_rigidity_threshold(M, r).threshold
            g = global_rigidity_threshold(EM, r).threshold
            rows.append((r, tau, g, global_bound(ldc, tau)))
        commute = all(EM @ T == ldc.E @ (M @ T) for T, _ in _gl_images(M.n, M.p))
        return name, ldc.verified, rows, commute

    res = parallel_map(one, fixtures, threads)
    pairs = sum(len(rows) for _, _, rows, _ in res)
    viol = sum(1 for _, _, rows, _ in res for r, tau, g, b in rows if not g > b)
    noncommuting = sum(1 for *_, c in res if not c)
    named = {
        name: {"verified_ldc": ver, "per_r": [{"r": r, "row": tau, "global": g, "bound": b} for r, tau, g, b in rows]}
        for name, ver, rows, _ in res
        if not name.startswith("fr")
    }
    return {
        "criterion": 5,
        "fixtures": len(fixtures),
        "pairs": pairs,
        "violations": viol,
        "noncommuting": noncommuting,
        "min_margin": min(g - b for _, _, rows, _ in res for _, _, g, b in rows),
        "named": named,
        "digest": _digest([rows for _, _, rows, _ in res]),
        "passed": pairs >= 20 and viol == 0 and noncommuting == 0,
    }


# ---------------------------------------------------------------------------
# 6. global thresholds add over side-by-side copies


def square_block() -> FieldMatrix:
    """Lex-least 4x2 GF(2) matrix with the largest global threshold at r = 2."""
    best, best_M = -1, None
    for M in all_matrices(4, 2):
        g = global_rigidity_threshold(M, 2).threshold
        if g > best:
            best, best_M = g, M
    return best_M


def criterion6(threads: int = 1) -> dict:
    X = square_block()
    checks = []
    for copies in (2, 3):
        S = stack_square(X, copies)
        Z = hstack(S, FieldMatrix.zeros(X.m, 1, X.p))
        for r in (1, 2):
            g_block = global_rigidity_threshold(X, r).threshold
            g_stack = global_rigidity_threshold(S, r).threshold
            g_pad = global_rigidity_threshold(Z, r).threshold
            checks.append({
                "copies": copies,
                "r": r,
                "block": g_block,
                "stacked": g_stack,
                "padded": g_pad,
                "rank_kept": S.rank() == X.rank(),
                "ok": g_stack == copies * g_block and g_pad == g_stack and S.rank() == X.rank(),
            })
    return {
        "criterion": 6,
        "block": X,
        "block_rigid_at_r2": global_rigidity_threshold(X, 2).threshold > 0,
        "checks": checks,
        "passed": all(c["ok"] for c in checks) and global_rigidity_threshold(X, 2).threshold > 0,
    }


# ---------------------------------------------------------------------------
# 7. counting bounds, both directions


def criterion7(threads: int = 1) -> dict:
    rng = np.random.default_rng(SEED + 7)
    targets = [FieldMatrix(rng.integers(0, 2, size=(int(rng.integers(1, 17)), 8)), 2) for _ in range(100)]
    dss = parallel_map(lambda M: counting_upper_ds(M, 64, 1), targets, threads)
    probes = sorted({ds.t for ds in dss})
    spaces = sorted({ds.s for ds in dss})
    valid = sum(1 for M, ds in zip(targets, dss) if verify_ds(M, ds).valid)
    lower = counting_lower_search(2, 3, 4, 3, threads=threads)
    upper_ok = probes == [4] and spaces == [16] and valid == 100
    return {
        "criterion": 7,
        "upper": {"targets": len(targets), "t": probes, "s_prime": spaces, "valid": valid},
        "lower": {
            "t_min_worst": lower.t_min_worst,
            "frozen": COUNTING_LOWER_2_3_4_3,
            "hardest": lower.hardest,
            "histogram": lower.histogram,
            "scanned": lower.scanned,
        },
        "passed": upper_ok and lower.t_min_worst == COUNTING_LOWER_2_3_4_3 and lower.scanned == 4096,
    }


# ---------------------------------------------------------------------------
# 8. linearization of black-box preprocessing


def _black_boxes():
    rng = np.random.default_rng(SEED + 8)
    boxes = []
    for i in range(50):
        kind = ("linear", "affine", "nonlinear")[i % 3]
        n = int(rng.integers(2, 7))
        m = int(rng.integers(1, 5))
        s = m + int(rng.integers(1, 4))  # s > m keeps ker Q nontrivial
        t = int(rng.integers(1, s + 1))
        Q = np.zeros((m, s), dtype=np.int64)
        for row in range(m):
            cols = rng.choice(s, size=int(rng.integers(1, t + 1)), replace=False)
            Q[row, cols] = 1
        P0 = rng.integers(0, 2, size=(s, n))
        Qm = FieldMatrix(Q, 2)
        M = Qm @ FieldMatrix(P0, 2)
        shift = np.zeros(s, dtype=np.int64)
        a = b = cell = None
        if kind == "affine":
            K = kernel_basis(Qm).data
            if rng.random() < 0.7 and len(K):
                shift = np.mod(rng.integers(0, 2, size=len(K)) @ K, 2)
            else:
                shift = rng.integers(0, 2, size=s)
        elif kind == "nonlinear":
            a, b = (int(v) for v in rng.choice(n, size=2, replace=False))
            cell = int(rng.integers(0, s))
        boxes.append((kind, Qm, M, P0, shift, a, b, cell))
    return boxes


def _make_box(P0, shift, a, b, cell):
    def box(x):
        v = np.mod(P0 @ np.asarray(x, dtype=np.int64) + shift, 2)
        if cell is not None:
            v[cell] ^= x[a] & x[b]
        return tuple(int(c) for c in v)

    return box


def _computes(box, Q: FieldMatrix, M: FieldMatrix) -> bool:
    X = np.array(list(itertools.product((0, 1), repeat=M.n)), dtype=np.int64)
    cells = np.array([box(tuple(x)) for x in X], dtype=np.int64)
    return bool(np.array_equal(np.mod(cells @ Q.data.T, 2), np.mod(X @ M.data.T, 2)))


def criterion8(threads: int = 1) -> dict:
    def one(item):
        kind, Q, M, P0, shift, a, b, cell = item
        box = _make_box(P0, shift, a, b, cell)
        truth = _computes(box, Q, M)
        try:
            ds = linearize(box, Q, M)
        except NotComputingM:
            return kind, truth, False, False
        exact = kind != "linear" or np.array_equal(ds.P.data, np.mod(P0, 2))
        return kind, truth, verify_ds(M, ds).valid, exact

    res = parallel_map(one, _black_boxes(), threads)
    mismatch = sum(1 for _, truth, valid, _ in res if truth != valid)
    inexact = sum(1 for kind, truth, valid, exact in res if valid and not exact)
    by_kind = {}
    for kind, truth, *_ in res:
        d = by_kind.setdefault(kind, {"boxes": 0, "computing": 0})
        d["boxes"] += 1
        d["computing"] += int(truth)
    return {
        "criterion": 8,
        "boxes": len(res),
        "by_kind": by_kind,
        "mismatches": mismatch,
        "linear_not_reproduced": inexact,
        "passed": len(res) == 50 and mismatch == 0 and inexact == 0,
    }


# ---------------------------------------------------------------------------
# 9. non-rigid decompositions force a large inner dimension


def criterion9(threads: int = 1, harvest=None) -> dict:
    if harvest is None:
        harvest = _criterion3_core(threads)[1]
    res = parallel_map(lambda w: refutation_inner_dim_check(*w), harvest, threads)
    fails = sum(1 for ok in res if not ok)
    return {
        "criterion": 9,
        "witnesses": len(harvest),
        "violations": fails,
        "passed": len(harvest) > 0 and fails == 0,
    }


# ---------------------------------------------------------------------------

CRITERIA = {
    1: criterion1,
    2: criterion2,
    3: criterion3,
    4: criterion4,
    5: criterion5,
    6: criterion6,
    7: criterion7,
    8: criterion8,
    9: criterion9,
}


def run_criteria(which=None, threads: int = 1) -> dict:
    """Reports for the requested criteria (default 1-9), JSON-ready."""
    which = sorted(which or CRITERIA)
    out = {}
    harvest = None
    for c in which:
        if c == 3 or (c == 9 and harvest is None):
            rep, harvest = _criterion3_core(threads)
            if c == 3:
                out["3"] = to_jsonable(rep)
                continue
        if c == 9:
            out["9"] = to_jsonable(criterion9(threads, harvest))
            continue
        out[str(c)] = to_jsonable(CRITERIA[c](threads))
    return out


def criterion10(threads_a: int = 1, threads_b: int = 8, which=None) -> dict:
    """Same reports, byte for byte, from cold caches at two thread counts."""
    from .report import dumps

    clear_caches()
    a = dumps(run_criteria(which, threads_a))
    clear_caches()
    b = dumps(run_criteria(which, threads_b))
    return {
        "criterion": 10,
        "threads": [threads_a, threads_b],
        "sha256": [hashlib.sha256(a.encode()).hexdigest(), hashlib.sha256(b.encode()).hexdigest()],
        "passed": a == b,
    }
