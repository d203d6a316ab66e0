"""Command-line front end.

Exit codes: 0 success, 2 usage error, 3 numeric failure, 4 evaluation budget
exhausted (a partial report is still written).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import branches as br
from . import derivatives as dv
from . import divdiff as dd
from . import falsifier as fz
from .errors import (BudgetExhausted, DomainError, IllConditioned, NoConvergence, NotHermitian,
                     NotVanishing, OrderTooLow, SchattenIsoError, SingularOperand)
from .linalg import load_matrix, save_matrix, schatten_norm
from .moi import divided_difference_symbol, moi_apply

OUT_ENV = "SCHATTEN_ISO_OUT"
EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_BUDGET = 0, 2, 3, 4
NUMERIC_ERRORS = (NoConvergence, NotHermitian, SingularOperand, IllConditioned, NotVanishing,
                  DomainError, OrderTooLow, ArithmeticError)


class UsageError(Exception):
    pass


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _extended_real(text: str) -> float:
    if text.strip().lower() in {"inf", "infinity", "oo"}:
        return math.inf
    try:
        return float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc


def _out_path(path: str | None) -> Path | None:
    if path is None:
        return None
    p = Path(path)
    base = os.environ.get(OUT_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    p.parent.mkdir(parents=True, exist_ok=True)
    return p


def _emit(text: str, out: str | None) -> None:
    path = _out_path(out)
    if path is None:
        sys.stdout.write(text)
    else:
        path.write_text(text)


def _symbol(spec: str, eps: float = 0.0) -> dd.ScalarSymbol:
    name, _, arg = spec.partition(":")
    if name == "power":
        return dd.power(int(arg or 1))
    if name == "abs-power":
        if not arg:
            raise UsageError("abs-power needs an exponent, e.g. abs-power:0.5")
        return dd.abs_power(float(arg), eps)
    if name == "exp":
        return dd.exponential()
    if name == "sin":
        return dd.sine()
    raise UsageError(f"unknown symbol {spec!r} (power:d, abs-power:p, exp, sin)")


def _load(path: str):
    try:
        return load_matrix(path)
    except FileNotFoundError as exc:
        raise UsageError(f"no such file: {path}") from exc
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        raise UsageError(f"bad matrix file {path}: {exc}") from exc


def _check_p(p: float, upper_inclusive: bool = False) -> None:
    ok = 0 < p <= 1 if upper_inclusive else 0 < p < 1
    if not ok:
        raise UsageError(f"p={p} out of range")


# -- subcommands ----------------------------------------------------------

def cmd_norm(args) -> int:
    if not args.p > 0:
        raise UsageError("p must be positive")
    print(_fmt(schatten_norm(_load(args.matrix), args.p)))
    return EXIT_OK


def cmd_derive(args) -> int:
    A, B = _load(args.a), _load(args.b)
    if args.kind == "trace":
        f = _symbol(args.symbol, args.eps)
        closed = dv.trace_derivative(f, A, B, args.order)

        def g(t):
            from .linalg import matrix_function
            return float(np.trace(matrix_function(A + t * B, f)).real)
    else:
        if args.p is None:
            raise UsageError("--p is required for --kind schatten")
        _check_p(args.p, upper_inclusive=args.order == 1)
        if args.order == 1:
            closed = dv.schatten_first_derivative(A, B, args.p)
        else:
            closed = dv.schatten_second_derivative(A, B, args.p)
        g = dv.schatten_power_path(A, B, args.p)
    rep = dv.DerivativeReport(args.order, closed, dv.finite_difference(g, 0.0, args.order, args.h))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["order", "closed_form", "finite_difference", "abs_err", "rel_err"])
    w.writerow([rep.order, _fmt(rep.closed_form), _fmt(rep.finite_difference), _fmt(rep.abs_err), _fmt(rep.rel_err)])
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_moi(args) -> int:
    A, B = _load(args.a), _load(args.b)
    f = _symbol(args.symbol, args.eps)
    phi = divided_difference_symbol(f, args.order, args.group_tol)
    T = moi_apply(phi, [A] * (args.order + 1), [B] * args.order, args.group_tol)
    path = _out_path(args.out)
    if path is None:
        from .linalg import matrix_to_payload
        print(json.dumps(matrix_to_payload(T)))
    else:
        save_matrix(path, T)
    return EXIT_OK


def cmd_branches(args) -> int:
    fam = br.track_branches(_load(args.a), _load(args.b), args.center, args.half_width, args.points)
    _emit(fam.to_csv(), args.out)
    return EXIT_OK


def cmd_multiplicity(args) -> int:
    if args.branches:
        fam = br.BranchFamily.read_csv(args.branches)
    elif args.a and args.b:
        fam = br.track_branches(_load(args.a), _load(args.b), args.center, args.half_width, args.points)
    else:
        raise UsageError("give --branches or both --a and --b")
    idx = br.vanishing_branches(fam, args.zero_tol)
    ests = [br.estimate_zero_multiplicity(fam, k, args.zero_tol) for k in idx]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["branch_index", "m", "mu0", "fit_residual", "confidence"])
    for e in ests:
        w.writerow([e.branch_index, e.m, _fmt(e.mu0), _fmt(e.fit_residual), _fmt(e.confidence)])
    if args.q is not None and args.p is not None:
        rep = br.series_condition_check(fam, ests, args.q, args.p)
        w.writerow([])
        w.writerow(["condition", "satisfied", "residual"])
        for cid, ok, res in rep.matched_conditions:
            w.writerow([cid, int(ok), _fmt(res)])
        w.writerow(["sign_obstruction", int(rep.sign_obstruction), ""])
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_verify_iqp(args) -> int:
    _check_p(args.p)
    try:
        inst = fz.EmbeddingInstance(args.q, args.p, _load(args.a), _load(args.b))
    except NotHermitian:
        raise
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rep = fz.iqp_residual(inst)
    text = json.dumps(rep.to_dict(), indent=2) + "\n"
    _emit(text, args.out)
    return EXIT_OK


def _search_config(args) -> fz.SearchConfig:
    if args.seed < 0:
        raise UsageError("seed must be non-negative")
    return fz.SearchConfig(restarts=args.restarts, max_evals=args.max_evals, seed=args.seed,
                           screen=args.screen, polish=args.polish, workers=args.workers,
                           total_evals=args.total_evals,
                           complex_mode=getattr(args, "complex", False))


def _run_search(fn, args) -> int:
    _check_p(args.p)
    if not args.q > 0:
        raise UsageError("q must be positive")
    if args.n < 2:
        raise UsageError("n must be at least 2")
    code = EXIT_OK
    try:
        rep = fn(args.q, args.p, args.n, _search_config(args))
    except BudgetExhausted as exc:
        rep = exc.report
        code = EXIT_BUDGET
        print(f"error: {exc}", file=sys.stderr)
    text = json.dumps(rep.to_dict(), indent=2) + "\n"
    _emit(text, args.out)
    if args.csv:
        _out_path(args.csv).write_text(fz.sweep_rows([rep]))
    return code


def cmd_falsify(args) -> int:
    return _run_search(fz.falsify, args)


def cmd_falsify_commutative(args) -> int:
    return _run_search(fz.falsify_commutative, args)


def _probe_family(args):
    fam = args.family
    if fam == "abs":
        return abs
    if fam == "tabs":
        return lambda t: t * abs(t)
    if fam == "gap":
        return lambda t: (1 + abs(t) ** args.q1) ** args.power - args.a * abs(t) ** args.q2
    if fam == "binomial":
        return lambda t: (1 + abs(t) ** args.q) ** (args.p / args.q)
    raise UsageError(f"unknown family {fam!r}")


def cmd_probe(args) -> int:
    print(dv.differentiability_probe(_probe_family(args), args.t0, args.probe_tol))
    return EXIT_OK


def cmd_report(args) -> int:
    texts = []
    for path in args.inputs:
        try:
            texts.append(Path(path).read_text())
        except FileNotFoundError as exc:
            raise UsageError(f"no such file: {path}") from exc
    try:
        merged = fz.merge_sweeps(texts)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit(merged, args.out)
    return EXIT_OK


# -- parser ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="schatten-iso",
                                     description="Schatten quasi-norm perturbation toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("norm", help="Schatten p-quasi-norm of a matrix")
    p.add_argument("--matrix", required=True)
    p.add_argument("--p", type=_extended_real, required=True)
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("derive", help="closed-form derivative vs finite difference")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--order", type=int, choices=(1, 2), required=True)
    p.add_argument("--kind", choices=("trace", "schatten"), default="schatten")
    p.add_argument("--symbol", default="power:3", help="trace symbol: power:d, abs-power:p, exp, sin")
    p.add_argument("--p", type=float)
    p.add_argument("--eps", type=float, default=0.0)
    p.add_argument("--h", type=float, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("moi", help="multiple operator integral of a divided-difference symbol")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--symbol", required=True)
    p.add_argument("--order", type=int, default=1)
    p.add_argument("--eps", type=float, default=0.0)
    p.add_argument("--group-tol", type=float, default=dd.GROUP_TOL)
    p.add_argument("--out")
    p.set_defaults(func=cmd_moi)

    for name, func in (("branches", cmd_branches), ("multiplicity", cmd_multiplicity)):
        p = sub.add_parser(name, help="eigenvalue branches of A + tB" if name == "branches"
                           else "zero multiplicities of vanishing branches")
        p.add_argument("--a", required=name == "branches")
        p.add_argument("--b", required=name == "branches")
        p.add_argument("--center", type=float, default=0.0)
        p.add_argument("--half-width", type=float, default=0.05)
        p.add_argument("--points", type=int, default=41)
        p.add_argument("--out")
        if name == "multiplicity":
            p.add_argument("--branches", help="branch CSV written by the branches subcommand")
            p.add_argument("--zero-tol", type=float, default=br.ZERO_TOL)
            p.add_argument("--q", type=_extended_real)
            p.add_argument("--p", type=float)
        p.set_defaults(func=func)

    p = sub.add_parser("verify-iqp", help="residual of the isometry identity for a given pair")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--q", type=_extended_real, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify_iqp)

    defaults = fz.SearchConfig()
    for name, func in (("falsify", cmd_falsify), ("falsify-commutative", cmd_falsify_commutative)):
        p = sub.add_parser(name, help="multi-start search for an isometry witness")
        p.add_argument("--q", type=_extended_real, required=True)
        p.add_argument("--p", type=float, required=True)
        p.add_argument("--n", type=int, default=2)
        p.add_argument("--restarts", type=int, default=defaults.restarts)
        p.add_argument("--max-evals", type=int, default=defaults.max_evals)
        p.add_argument("--screen", type=int, default=defaults.screen)
        p.add_argument("--polish", type=int, default=defaults.polish)
        p.add_argument("--total-evals", type=int, default=None)
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out")
        p.add_argument("--csv", help="also write a one-row sweep CSV (q,p,n,seed,floor)")
        if name == "falsify-commutative":
            p.add_argument("--complex", action="store_true")
        p.set_defaults(func=func)

    p = sub.add_parser("probe", help="numerical differentiability class at a point")
    p.add_argument("--family", choices=("abs", "tabs", "gap", "binomial"), required=True)
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--q1", type=float, default=0.5)
    p.add_argument("--q2", type=float, default=0.25)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--power", type=float, default=1 / 3)
    p.add_argument("--q", type=float, default=0.5)
    p.add_argument("--p", type=float, default=0.3)
    p.add_argument("--probe-tol", type=float, default=dv.PROBE_TOL)
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("report", help="merge sweep CSVs")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--out")
    p.set_defaults(func=cmd_report)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NUMERIC_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (SchattenIsoError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
