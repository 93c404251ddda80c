"""Command-line front end.

Reports go to stdout as JSON, diagnostics to stderr. Exit codes: 0 outcome
produced, 2 precondition or hypothesis failure, 3 budget exceeded, 4 I/O or
format error. ``acceptance`` exits 1 when a criterion fails.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import __version__
from ._util import as_fraction, resolve_budget
from .amplify import apply_ldc, global_bound, hadamard_ldc, ldc_span_check, stack_square
from .codes import CATALOG, build_code, friedman_matrix
from .dims import AboveMax, inner_dimension, outer_dimension
from .dscore import LinearDS, counting_lower_search, counting_upper_ds, sumset_evasive_bruteforce, verify_ds
from .errors import (
    BudgetExceeded,
    DimensionMismatch,
    FormatError,
    InnerTooSmall,
    NotACover,
    NotComputingM,
    PreconditionViolated,
    RankDeficient,
    UnsupportedKind,
)
from .extract import find_rigid_submatrix, run_schedule
from .gfmat import read_matrix, write_matrix
from .pipelines import pipeline_ds_to_square_rigid, pipeline_rigid_to_ds_lb
from .report import Timer, dumps, make_report
from .rigidity import global_rigidity_threshold, row_rigidity_threshold, strong_row_rigidity, strong_threshold

EXIT_OK, EXIT_FAIL, EXIT_HYPOTHESIS, EXIT_BUDGET, EXIT_IO = 0, 1, 2, 3, 4


def _fraction(text: str) -> Fraction:
    try:
        return as_fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _schedule(text: str) -> tuple[list[int], list[int]]:
    r_seq, t_seq = [], []
    for step in filter(None, (s.strip() for s in text.split(";"))):
        try:
            r, t = (int(x) for x in step.split(","))
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"schedule steps look like r,t; got {step!r}") from exc
        r_seq.append(r)
        t_seq.append(t)
    return r_seq, t_seq


def _ldc_spec(text: str) -> int:
    kind, _, k = text.partition(":")
    if kind != "hadamard" or not k.isdigit():
        raise argparse.ArgumentTypeError("only hadamard:<k> is shipped")
    return int(k)


# ---------------------------------------------------------------------------
# subcommands: each returns (outcome, extra report fields, input matrices)


def cmd_inner_dim(a):
    M = read_matrix(a.matrix)
    w = inner_dimension(M, a.t, a.budget)
    return w, {"p": M.p, "m": M.m, "n": M.n, "t": a.t, "value": w.value, "witness": w.witness.G, "exhausted": w.exhausted}, {"matrix": M}


def cmd_outer_dim(a):
    M = read_matrix(a.matrix)
    w = outer_dimension(M, a.t, a.s_max, a.budget)
    extra = {"p": M.p, "m": M.m, "n": M.n, "t": a.t, "value": w.value, "exhausted": w.exhausted}
    if not isinstance(w, AboveMax):
        extra["witness"] = w.witness.G
    return w, extra, {"matrix": M}


def cmd_rigidity(a):
    M = read_matrix(a.matrix)
    if a.mode == "row":
        cert = row_rigidity_threshold(M, a.r, a.budget)
    elif a.mode == "global":
        cert = global_rigidity_threshold(M, a.r, a.budget)
    else:
        if a.t is None:
            if a.method != "gl-enum":
                raise PreconditionViolated("--mode strong with this method needs --t")
            cert = strong_threshold(M, a.r, a.budget)
        else:
            res = strong_row_rigidity(M, a.r, a.t, a.method, a.budget)
            return res, {"rigid": res.rigid}, {"matrix": M}
    extra = {"threshold": cert.threshold, "refuting_L": cert.refuting_L}
    if a.t is not None:
        extra["rigid"] = cert.is_rigid(a.t)
    return cert, extra, {"matrix": M}


def cmd_sumset(a):
    M = read_matrix(a.matrix)
    res = sumset_evasive_bruteforce(M.rows, a.s, a.t, M.p, n=M.n, budget=a.budget)
    return res, {"evasive": type(res).__name__ == "Evasive"}, {"matrix": M}


def cmd_verify_ds(a):
    M = read_matrix(a.matrix)
    with open(a.ds, encoding="ascii", newline="") as fh:
        ds = LinearDS.from_text(fh.read())
    check = verify_ds(M, ds)
    return check, {"valid": check.valid}, {"matrix": M}


def cmd_synth_counting(a):
    M = read_matrix(a.matrix)
    ds = counting_upper_ds(M, a.s, a.eps)
    if a.out:
        with open(a.out, "w", encoding="ascii", newline="\n") as fh:
            fh.write(ds.to_text())
    return ds, {"s_prime": ds.s, "t": ds.t, "valid": verify_ds(M, ds).valid}, {"matrix": M}


def cmd_counting_search(a):
    res = counting_lower_search(a.p, a.n, a.m, a.s, a.budget, a.threads)
    return res, {"value": res.t_min_worst}, {}


def cmd_extract(a):
    M = read_matrix(a.matrix)
    if a.schedule is not None:
        r_seq, t_seq = a.schedule
        out = run_schedule(M, r_seq, t_seq, a.budget)
    else:
        if a.eps is None or a.k is None or a.t is None:
            raise PreconditionViolated("extract needs --eps, --k and --t, or --schedule")
        out = find_rigid_submatrix(M, a.eps, a.k, a.t, a.budget)
    return out, {"branch": type(out).__name__}, {"matrix": M}


def cmd_ldc(a):
    ldc = hadamard_ldc(a.k, declared=not a.check, budget=a.budget)
    extra = {"m_prime": ldc.m_prime, "q": ldc.q_queries, "delta": ldc.delta, "verified": ldc.verified}
    if a.check:
        extra["span_check"] = ldc_span_check(ldc.E, ldc.q_queries, ldc.delta, a.budget) is True
    return ldc, extra, {}


def cmd_amplify(a):
    M = read_matrix(a.matrix)
    if a.ldc != M.m:
        raise DimensionMismatch(f"hadamard:{a.ldc} encodes length-{a.ldc} columns, M has {M.m} rows")
    ldc = hadamard_ldc(a.ldc, budget=a.budget)
    EM = apply_ldc(ldc, M)
    row = row_rigidity_threshold(M, a.r, a.budget)
    glob = global_rigidity_threshold(EM, a.r, a.budget)
    bound = global_bound(ldc, row.threshold)
    extra = {"encoded": EM, "row_threshold": row.threshold, "global_threshold": glob.threshold, "bound": bound, "holds": glob.threshold > bound, "ldc_verified": ldc.verified}
    return {"row": row, "global": glob}, extra, {"matrix": M}


def cmd_stack(a):
    M = read_matrix(a.matrix)
    S = stack_square(M, a.copies)
    if a.out:
        write_matrix(S, a.out)
    return S, {"rank": S.rank()}, {"matrix": M}


def cmd_code(a):
    if a.list:
        return dict(CATALOG), {}, {}
    if a.kind is None:
        raise PreconditionViolated("code needs --kind or --list")
    code = build_code(a.kind, a.p, k=a.k, block=a.block, budget=a.budget)
    M = friedman_matrix(code)
    if a.emit_matrix:
        write_matrix(M, a.emit_matrix)
    return code, {"n_code": code.n_code, "k_code": code.k_code, "min_distance": code.min_distance}, {}


def cmd_pipeline_square(a):
    M = read_matrix(a.matrix)
    res = pipeline_ds_to_square_rigid(M, a.eps, a.t, a.ldc_k, a.r, a.budget)
    extra = {"branch": res.branch}
    if res.branch == "Rigid":
        extra["certified"] = {"r": res.r, "square_threshold": res.square_threshold, "size": res.square.m}
    else:
        space, probes = res.extraction.implied_ds
        extra["implied_ds"] = {"s": space, "t": probes}
    return res, extra, {"matrix": M}


def cmd_pipeline_dslb(a):
    M = read_matrix(a.matrix)
    res = pipeline_rigid_to_ds_lb(M, a.r, a.t, a.budget)
    return res, {"hypothesis": res.hypothesis, "lower_bound": {"s": res.s_max, "t": res.t} if res.hypothesis else None}, {"matrix": M}


def cmd_acceptance(a):
    from .sweeps import CRITERIA, criterion10, run_criteria

    which = [int(x) for x in a.criteria.split(",")] if a.criteria else sorted(CRITERIA)
    core = [c for c in which if c != 10]
    reports = run_criteria(core, a.threads) if core else {}
    if 10 in which:
        reports["10"] = criterion10(1, max(a.threads, 8), core or None)
    for key, rep in reports.items():
        print(f"criterion {key}: {'PASS' if rep['passed'] else 'FAIL'}", file=sys.stderr)
    return reports, {"all_passed": all(r["passed"] for r in reports.values())}, {}


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, default=None, help="max candidates per enumeration (default: RIGX_BUDGET or 10^8)")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--no-timing", action="store_true", help="omit elapsed_ms so reports are byte-stable")

    parser = argparse.ArgumentParser(prog="rigx", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"rigx {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=fn)
        return p

    p = add("inner-dim", cmd_inner_dim, "inner dimension d_V(t)")
    p.add_argument("--matrix", required=True)
    p.add_argument("--t", type=int, required=True)

    p = add("outer-dim", cmd_outer_dim, "outer dimension D_V(t), or a lower bound")
    p.add_argument("--matrix", required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--s-max", type=int, required=True)

    p = add("rigidity", cmd_rigidity, "row, global or strong rigidity")
    p.add_argument("--matrix", required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--mode", choices=("row", "global", "strong"), default="row")
    p.add_argument("--method", choices=("inner-dim", "gl-enum", "sum-cover"), default="inner-dim")
    p.add_argument("--t", type=int, default=None)

    p = add("sumset", cmd_sumset, "sumset evasiveness by brute force")
    p.add_argument("--matrix", required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--t", type=int, required=True)

    p = add("verify-ds", cmd_verify_ds, "check a linear data structure file against M")
    p.add_argument("--matrix", required=True)
    p.add_argument("--ds", required=True)

    p = add("synth-counting", cmd_synth_counting, "partition data structure for M")
    p.add_argument("--matrix", required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--eps", type=_fraction, required=True)
    p.add_argument("--out", default=None, help="write the data structure file here")

    p = add("counting-search", cmd_counting_search, "worst-case probe count over all m x n matrices")
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--s", type=int, required=True)

    p = add("extract", cmd_extract, "rigid submatrix extraction")
    p.add_argument("--matrix", required=True)
    p.add_argument("--eps", type=_fraction)
    p.add_argument("--k", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--schedule", type=_schedule, help='"r1,t1;r2,t2;..."')

    p = add("ldc", cmd_ldc, "Hadamard LDC generator")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--check", action="store_true", help="verify the span property exhaustively")

    p = add("amplify", cmd_amplify, "encode M and compare global to row rigidity")
    p.add_argument("--matrix", required=True)
    p.add_argument("--ldc", type=_ldc_spec, required=True, help="hadamard:<k>")
    p.add_argument("--r", type=int, required=True)

    p = add("stack", cmd_stack, "side-by-side copies of M")
    p.add_argument("--matrix", required=True)
    p.add_argument("--copies", type=int, required=True)
    p.add_argument("--out", default=None)

    p = add("code", cmd_code, "shipped codes and their matrices")
    p.add_argument("--kind", default=None)
    p.add_argument("--list", action="store_true")
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--k", type=int, default=2, help="repetition_block: message length")
    p.add_argument("--block", type=int, default=4, help="repetition_block: block length")
    p.add_argument("--emit-matrix", default=None)

    p = add("pipeline-square", cmd_pipeline_square, "no cheap DS -> rigid block -> square globally rigid matrix")
    p.add_argument("--matrix", required=True)
    p.add_argument("--eps", type=_fraction, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--ldc-k", type=int, default=None)
    p.add_argument("--r", type=int, default=None)

    p = add("pipeline-dslb", cmd_pipeline_dslb, "strong rigidity -> DS space lower bound")
    p.add_argument("--matrix", required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--t", type=int, required=True)

    p = add("acceptance", cmd_acceptance, "run the acceptance sweeps")
    p.add_argument("--criteria", default=None, help="comma-separated subset of 1-10 (default 1-9; 10 reruns them at two thread counts)")
    return parser


_PARAM_SKIP = {"func", "command", "budget", "threads", "no_timing"}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    budget = resolve_budget(args.budget)
    args.budget = budget
    params = {k: v for k, v in vars(args).items() if k not in _PARAM_SKIP}
    try:
        with Timer() as timer:
            outcome, extra, inputs = args.func(args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (OSError, FormatError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (PreconditionViolated, RankDeficient, NotACover, NotComputingM, InnerTooSmall, DimensionMismatch, UnsupportedKind, ValueError) as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    report = make_report(
        args.command,
        params,
        outcome,
        inputs=inputs,
        budget=budget,
        elapsed_ms=None if args.no_timing else timer.ms,
        **extra,
    )
    sys.stdout.write(dumps(report))
    if args.command == "pipeline-dslb" and not extra["hypothesis"]:
        return EXIT_HYPOTHESIS
    if args.command == "acceptance" and not extra["all_passed"]:
        return EXIT_FAIL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
