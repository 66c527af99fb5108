"""Command-line front end: profiles, curves, check, bryant, limits.

Exit codes are a contract: 0 pass, 1 fail, 2 usage or configuration error,
3 hypothesis not met.  Identical config and command produce byte-identical
delimited output.  When a CSV is written to a file, a companion PNG with the
same stem is rendered next to it unless --no-fig is given.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from .config import ConfigError, RunConfig, load_config
from .functionals import admissibility, bulk_integral_grid, curve, default_rho_grid
from .green import ConvergenceError
from .profile import BUILTIN_PROFILES, builtin_profile
from .reporting import VERDICT_FAIL, VERDICT_HYPOTHESIS, VERDICT_PASS, format_report
from .theorems import CHECK_IDS, build_context, bryant_limit, run_check

__all__ = ["main"]

_EXIT_BY_VERDICT = {VERDICT_PASS: 0, VERDICT_FAIL: 1, VERDICT_HYPOTHESIS: 3}

CSV_HEADER = "rho,r,A,V,dA,dV,Q,dQ,bulk,residual"


def _fmt(value) -> str:
    return "%.17g" % float(value)


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _figure_path(out_path: str) -> str:
    stem, _ = os.path.splitext(out_path)
    return (stem or out_path) + ".png"


def _cmd_profiles() -> int:
    for name in sorted(BUILTIN_PROFILES):
        sys.stdout.write(f"{name:<28} {BUILTIN_PROFILES[name]}\n")
    return 0


def _cmd_curves(run: RunConfig, out: str | None, no_fig: bool) -> int:
    ctx = build_context(run.profile, run.numeric)
    prm = run.params
    bd = ctx.bdata(prm.k)
    rho = default_rho_grid(bd, run.numeric.grid_size)
    r_arr = np.atleast_1d(bd.invert(rho))
    pts = curve(bd, run.profile, prm, rho, run.numeric.quad_tol)
    A = np.array([c.A for c in pts])
    V = np.array([c.V for c in pts])
    dA = np.array([c.dA for c in pts])
    dV = np.array([c.dV for c in pts])
    adm = admissibility(run.profile.n, prm)
    try:
        bulk = bulk_integral_grid(
            bd,
            run.profile,
            prm,
            rho,
            ("hess_b2_sq", "ricf_grad", "grad_grad"),
            run.numeric.quad_tol,
        )
    except ValueError:
        bulk = np.full(len(rho), math.nan)
    Q = A - prm.alpha * V
    dQ = dA - prm.alpha * dV
    lin = (adm.lambda1 * A + adm.lambda2 * V) / rho
    residual = dQ - bulk - lin

    lines = [CSV_HEADER]
    for i in range(len(rho)):
        lines.append(
            ",".join(
                _fmt(v)
                for v in (
                    rho[i],
                    r_arr[i],
                    A[i],
                    V[i],
                    dA[i],
                    dV[i],
                    Q[i],
                    dQ[i],
                    bulk[i],
                    residual[i],
                )
            )
        )
    text = "\n".join(lines) + "\n"
    if out:
        _write_text(out, text)
        if not no_fig:
            from .figures import save_curves_figure

            save_curves_figure(
                _figure_path(out),
                rho,
                A,
                V,
                dQ,
                bulk,
                residual,
                title=f"n = {run.profile.n}, k = {prm.k:g}, l = {prm.l:g}, "
                f"beta = {prm.beta:g}, p = {prm.p:g}",
            )
    else:
        sys.stdout.write(text)
    return 0


def _cmd_check(run: RunConfig, theorem: str, out: str | None) -> int:
    if theorem not in CHECK_IDS:
        known = ", ".join(CHECK_IDS)
        sys.stderr.write(f"error: unknown theorem id '{theorem}' (known: {known})\n")
        return 2
    ctx = build_context(run.profile, run.numeric)
    try:
        report = run_check(theorem, ctx, run.params)
    except (ValueError, KeyError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    text = format_report(report) + "\n"
    sys.stdout.write(text)
    if out:
        _write_text(out, text)
    return _EXIT_BY_VERDICT[report.verdict]


def _cmd_bryant(n: int, out: str | None, no_fig: bool) -> int:
    if n < 3:
        sys.stderr.write("error: the pole analysis needs dimension n >= 3\n")
        return 2
    profile = builtin_profile("bryant_surrogate", n=n)
    ctx = build_context(profile)
    rep = bryant_limit(ctx)

    lines = ["r,bracket"]
    for r, v in zip(rep.probes, rep.bracket_values):
        lines.append(f"{_fmt(r)},{_fmt(v)}")
    csv_text = "\n".join(lines) + "\n"

    summary = [
        f"dimension: {rep.n}",
        f"fitted limit: {_fmt(rep.fitted_limit)}",
        f"predicted limit: {_fmt(rep.predicted_limit)}",
        f"relative deviation: {_fmt(rep.rel_deviation)}",
        f"sign: {rep.sign}" + (" (indeterminate sign)" if rep.sign == "indeterminate" else ""),
        f"direction of the scaled area derivative: {rep.direction}",
        f"direction stable from radius: {_fmt(rep.stabilization_radius)}",
        "expected behavior: "
        + (
            "not asserted in this dimension"
            if rep.matches_expected is None
            else ("matched" if rep.matches_expected else "NOT matched")
        ),
        f"verdict: {rep.verdict}",
    ]
    summary_text = "\n".join(summary) + "\n"

    if out:
        _write_text(out, csv_text)
        if not no_fig:
            from .figures import save_bryant_figure

            save_bryant_figure(_figure_path(out), rep)
        sys.stdout.write(summary_text)
    else:
        sys.stdout.write(csv_text)
        sys.stdout.write("\n" + summary_text)
    return 0 if rep.matches_expected is not False else 1


def _cmd_limits(run: RunConfig, out: str | None) -> int:
    ctx = build_context(run.profile, run.numeric)
    try:
        report = run_check("lemma-4.1", ctx, run.params)
    except (ValueError, KeyError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    text = format_report(report) + "\n"
    sys.stdout.write(text)
    if out:
        _write_text(out, text)
    return _EXIT_BY_VERDICT[report.verdict]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="greenlab",
        description="weighted Green's function functionals and machine checks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("profiles", help="list the built-in profiles")

    dim_help = "dimension override (defaults pick flat space in dimension N)"

    p_curves = sub.add_parser("curves", help="emit the functional table as CSV")
    p_curves.add_argument("--config", default=None, help="INI run configuration")
    p_curves.add_argument("--out", default=None, help="CSV output path (default stdout)")
    p_curves.add_argument("--n", type=int, default=None, help=dim_help)
    p_curves.add_argument("--no-fig", action="store_true", help="skip the companion figure")

    p_check = sub.add_parser("check", help="run one registered check")
    p_check.add_argument("--config", default=None, help="INI run configuration")
    p_check.add_argument("--theorem", required=True, help="check id, e.g. thm-4.3")
    p_check.add_argument("--out", default=None, help="also write the report here")
    p_check.add_argument("--n", type=int, default=None, help=dim_help)

    p_bryant = sub.add_parser("bryant", help="large-radius bracket analysis")
    p_bryant.add_argument("--n", type=int, default=3, help="dimension (default 3)")
    p_bryant.add_argument("--out", default=None, help="CSV output path (default stdout)")
    p_bryant.add_argument("--no-fig", action="store_true", help="skip the companion figure")

    p_limits = sub.add_parser("limits", help="small-level limit classification")
    p_limits.add_argument("--config", default=None, help="INI run configuration")
    p_limits.add_argument("--out", default=None, help="also write the report here")
    p_limits.add_argument("--n", type=int, default=None, help=dim_help)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "profiles":
            return _cmd_profiles()
        if args.command == "curves":
            run = load_config(args.config, n=args.n)
            return _cmd_curves(run, args.out, args.no_fig)
        if args.command == "check":
            run = load_config(args.config, n=args.n)
            return _cmd_check(run, args.theorem, args.out)
        if args.command == "bryant":
            return _cmd_bryant(args.n, args.out, args.no_fig)
        if args.command == "limits":
            run = load_config(args.config, n=args.n)
            return _cmd_limits(run, args.out)
    except ConfigError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except ConvergenceError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    parser.error(f"unknown command {args.command!r}")
    return 2


if __name__ == "__main__":
    sys.exit(main())
