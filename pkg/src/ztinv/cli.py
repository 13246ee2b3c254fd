"""Command-line front end.

    ztinv invert      --expr "exp(1/z)*sin(1/z)" --method dft --N 64
    ztinv compare     --expr "exp(exp(1/z))" --N 64
    ztinv error-model --A 1 --a 0.9 --n 0 --N 20 40
    ztinv oracle      --expr "1/(1-0.5*z^-1)" --N 10

Exit status: 0 success, 1 parse/config error, 2 evaluation failure,
3 expression has a non-integer power of z.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from typing import Dict, List, Optional

import numpy as np

from .core import (
    DEFAULT_ANNULUS,
    DEFAULT_QUAD_TOL,
    DEFAULT_SEED,
    ConfigError,
    DominantPoleModel,
    EvalError,
    InversionConfig,
    RankDeficient,
    ScalingOverflow,
    SignalEstimate,
    scale_transform,
    unscale_signal,
)
from .invdft import DEFAULT_N, invert_dft, predicted_aliasing_error
from .invlsq import invert_lsq
from .invquad import QuadratureSettings, invert_quad
from .series_oracle import UnsupportedForOracle, oracle_from_ast
from .zexpr import Expression, LexError, ParseError

EXIT_OK, EXIT_CONFIG, EXIT_EVAL, EXIT_FRACTIONAL = 0, 1, 2, 3
METHODS = ("lsq", "dft", "quad")
SEED_ENV = "ZTINV_SEED"

FRACTIONAL_WARNING = (
    "warning: X(z) raises z to a non-integer power (or takes sqrt of a "
    "z-dependent term). Such a function is multi-valued in z, so no "
    "discrete-time sequence has it as its Z-transform; nothing to invert.")
ROC_HINT = ("hint: all methods assume every pole of X(z) lies strictly inside the "
            "unit circle; use --scale a (0 < |a| < 1) to pull poles inward.")


def fmt(value: Optional[float]) -> str:
    if value is None or (isinstance(value, float) and np.isnan(value)):
        return ""
    return format(float(value), ".17g")


class _Table:
    """Rows of already-formatted cells plus trailing '#' status lines."""

    def __init__(self, header: List[str], sep: str):
        self.sep = sep
        self.lines = [sep.join(header)]

    def row(self, cells):
        self.lines.append(self.sep.join(cells))

    def footer(self, text: str):
        self.lines.append(f"# {text}")

    def text(self) -> str:
        return "\n".join(self.lines) + "\n"


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ztinv", description="Numerical inverse Z-transform.")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    env_seed = os.environ.get(SEED_ENV)
    default_seed = int(env_seed) if env_seed is not None else DEFAULT_SEED

    def common(p, need_expr=True):
        p.add_argument("--expr", required=need_expr, help="X(z) as text, e.g. '1/(1-0.5*z^-1)'")
        p.add_argument("--N", type=_positive_int, default=DEFAULT_N, help="number of samples")
        p.add_argument("--output", "-o", dest="output_path", help="write here instead of stdout")
        p.add_argument("--format", choices=("csv", "tsv"), default="csv")

    def inversion(p):
        p.add_argument("--m", type=_positive_int, help="LSQ sample points (default ceil(1.1(N+1)))")
        p.add_argument("--radius", type=float, help="contour radius for quad (default 1.0)")
        p.add_argument("--scale", type=float, help="pole scaling factor a, 0 < |a| < 1")
        p.add_argument("--seed", type=int, default=default_seed,
                       help=f"LSQ point seed (default {DEFAULT_SEED}, or ${SEED_ENV})")
        p.add_argument("--tol", type=float, default=DEFAULT_QUAD_TOL, help="quad absolute tolerance")
        p.add_argument("--annulus", type=float, nargs=2, default=list(DEFAULT_ANNULUS),
                       metavar=("RMIN", "RMAX"), help="LSQ sampling annulus")

    p = sub.add_parser("invert", help="invert X(z) with one method or all")
    common(p)
    inversion(p)
    p.add_argument("--method", choices=METHODS + ("all",), default="dft")

    p = sub.add_parser("compare", help="run every method side by side, with oracle errors")
    common(p)
    inversion(p)

    p = sub.add_parser("error-model", help="predicted DFT aliasing error for x[n] ~ A a^n")
    p.add_argument("--A", type=float, default=1.0, help="dominant-pole amplitude")
    p.add_argument("--a", type=float, required=True, help="dominant pole, |a| < 1")
    p.add_argument("--n", type=int, nargs="+", default=[0], help="sample index(es)")
    p.add_argument("--N", type=_positive_int, nargs="+", required=True, help="DFT length(s)")
    p.add_argument("--output", "-o", dest="output_path")
    p.add_argument("--format", choices=("csv", "tsv"), default="csv")

    p = sub.add_parser("oracle", help="series coefficients x[0..N-1] of X(z) in powers of 1/z")
    common(p)
    return parser


def _run_method(method: str, X, args) -> SignalEstimate:
    if method == "lsq":
        config = InversionConfig(args.N, args.m, annulus_min=args.annulus[0],
                                 annulus_max=args.annulus[1], rng_seed=args.seed)
        return invert_lsq(X, config)
    if method == "dft":
        return invert_dft(X, args.N)
    radius = 1.0 if args.radius is None else args.radius
    return invert_quad(X, args.N, QuadratureSettings(radius=radius, abs_tol=args.tol))


def _invert(method: str, expr: Expression, args) -> SignalEstimate:
    if args.scale is None:
        return _run_method(method, expr, args)
    est = _run_method(method, scale_transform(expr, args.scale), args)
    return SignalEstimate(unscale_signal(est.samples, args.scale), est.method,
                          residual_norm=est.residual_norm, imag_leakage=est.imag_leakage,
                          condition_estimate=est.condition_estimate,
                          refinements=est.refinements, est_errors=est.est_errors,
                          unconverged=est.unconverged)


def _diagnostics(est: SignalEstimate) -> str:
    parts = [f"{est.method.value}: status=ok"]
    for name in ("residual_norm", "imag_leakage", "condition_estimate"):
        value = getattr(est, name)
        if value is not None:
            parts.append(f"{name}={fmt(value)}")
    if est.unconverged:
        parts.append("unconverged=" + " ".join(map(str, est.unconverged)))
    return " ".join(parts)


class _FractionalPower(Exception):
    pass


def _parse_expr(args) -> Expression:
    expr = Expression(args.expr)
    if expr.has_fractional_power:
        raise _FractionalPower()
    return expr


def cmd_invert(args, err) -> str:
    expr = _parse_expr(args)
    if args.radius is not None and args.method in ("lsq", "dft"):
        print(f"warning: --radius only affects the quad method; ignored for {args.method}", file=err)
    methods = METHODS if args.method == "all" else (args.method,)
    results = {m: _invert(m, expr, args) for m in methods}
    if len(methods) == 1:
        est = results[methods[0]]
        header = ["n", "x_tilde"]
        if est.refinements is not None:
            header += ["est_error", "refinements"]
        table = _Table(header, args.sep)
        for n in range(args.N):
            cells = [str(n), fmt(est.samples[n])]
            if est.refinements is not None:
                cells += [fmt(est.est_errors[n]), str(est.refinements[n])]
            table.row(cells)
    else:
        table = _Table(["n"] + [f"x_tilde_{m}" for m in methods], args.sep)
        for n in range(args.N):
            table.row([str(n)] + [fmt(results[m].samples[n]) for m in methods])
    for m in methods:
        table.footer(_diagnostics(results[m]))
    return table.text()


def cmd_compare(args, err) -> str:
    expr = _parse_expr(args)
    results: Dict[str, Optional[SignalEstimate]] = {}
    status: Dict[str, str] = {}
    for m in METHODS:
        try:
            results[m] = _invert(m, expr, args)
            status[m] = _diagnostics(results[m])
        except (EvalError, RankDeficient, ScalingOverflow, ConfigError) as exc:
            results[m] = None
            status[m] = f"{m}: status=failed {type(exc).__name__}: {exc}"
            print(f"warning: {m} failed: {exc}", file=err)
    if all(r is None for r in results.values()):
        raise EvalError("every method failed")
    try:
        oracle = oracle_from_ast(expr.ast, max(args.N - 1, 1)).coeffs[: args.N]
        oracle_status = "oracle: status=ok"
    except (UnsupportedForOracle, ZeroDivisionError, ValueError, EvalError) as exc:
        oracle = None
        oracle_status = f"oracle: status=unavailable {exc}"

    header = ["n"] + list(METHODS)
    if oracle is not None:
        header += ["oracle"] + [f"abs_err_{m}" for m in METHODS]
    table = _Table(header, args.sep)
    for n in range(args.N):
        cells = [str(n)]
        cells += [fmt(r.samples[n]) if r is not None else "" for r in results.values()]
        if oracle is not None:
            cells.append(fmt(oracle[n]))
            cells += [fmt(abs(r.samples[n] - oracle[n])) if r is not None else ""
                      for r in results.values()]
        table.row(cells)
    for m in METHODS:
        table.footer(status[m])
    table.footer(oracle_status)
    return table.text()


def cmd_error_model(args, err) -> str:
    model = DominantPoleModel(args.A, args.a)
    table = _Table(["n", "N", "predicted_error", "ratio_to_first_N"], args.sep)
    for n in args.n:
        first = None
        for N in args.N:
            if n >= N:
                raise ConfigError(f"need n < N, got n={n}, N={N}")
            e = predicted_aliasing_error(model, n, N)
            first = e if first is None else first
            ratio = first / e if e > 0 else float("nan")
            table.row([str(n), str(N), fmt(e), fmt(ratio)])
    return table.text()


def cmd_oracle(args, err) -> str:
    expr = _parse_expr(args)
    coeffs = oracle_from_ast(expr.ast, max(args.N - 1, 1)).coeffs[: args.N]
    table = _Table(["n", "x"], args.sep)
    for n, c in enumerate(coeffs):
        table.row([str(n), fmt(c)])
    return table.text()


COMMANDS = {
    "invert": cmd_invert,
    "compare": cmd_compare,
    "error-model": cmd_error_model,
    "oracle": cmd_oracle,
}


def run(argv: Optional[List[str]] = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    args.sep = "\t" if args.format == "tsv" else ","
    try:
        text = COMMANDS[args.subcommand](args, err)
    except _FractionalPower:
        print(FRACTIONAL_WARNING, file=err)
        return EXIT_FRACTIONAL
    except (LexError, ParseError, ConfigError, UnsupportedForOracle) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_CONFIG
    except (EvalError, RankDeficient, ScalingOverflow, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=err)
        print(ROC_HINT, file=err)
        return EXIT_EVAL
    if args.output_path:
        with open(args.output_path, "w", newline="\n", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_OK


def main():
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    sys.exit(run())


if __name__ == "__main__":
    main()
