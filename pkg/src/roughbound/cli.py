"""Command-line surface: exact counts, bound evaluation, verification, data export.

Exit status contract: 0 success, 1 verification failure (or cross-method
disagreement), 2 usage/domain error, 3 resource error.  CSV output uses '.'
decimals, no grouping, and fixed column orders.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import __version__
from .analytic import AnalyticContext
from .buchstab import build_omega, locate_extremum, omega_samples
from .errors import DomainError, ResourceError
from .phi import DEFAULT_EXHAUSTIVE_CAP, phi_direct, phi_legendre, phi_two_prime
from .pipeline import (
    PipelineConfig,
    REGION_ORDER,
    SELBERG_CLOSED,
    SELBERG_FINITE,
    run_full_pipeline,
)
from .primes import build_prime_table
from .sieve_bounds import (
    bonferroni_bound,
    bonferroni_x_bound,
    elementary_bound,
    elementary_x_bound,
    final_large_y_bound,
    closed_form_factor,
    make_sieve_config,
    optimize_epsilon,
    selberg_sweep,
    selberg_upper,
)

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


def _data_dir() -> str | None:
    return os.environ.get("ROUGHBOUND_DATA_DIR")


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    base = _data_dir()
    if base and not os.path.isabs(path):
        path = os.path.join(base, path)
    return open(path, "w"), True


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="roughbound",
        description="Exact rough-number counts and verified explicit sieve bounds.",
    )
    p.add_argument("--version", action="version", version=f"roughbound {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("phi", help="compute the exact count of y-rough integers up to x")
    sp.add_argument("--x", type=int, required=True)
    sp.add_argument("--y", type=float, required=True)
    sp.add_argument("--method", choices=["direct", "legendre", "two-prime", "all"],
                    default="direct")
    sp.add_argument("--cap", type=int, default=DEFAULT_EXHAUSTIVE_CAP,
                    help="exhaustive cap for the direct method")

    sp = sub.add_parser("omega", help="evaluate the rough-number density function")
    sp.add_argument("--u", type=float, required=True)
    sp.add_argument("--u-max", type=float, default=16.0)
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.add_argument("--extremum", action="store_true",
                    help="also print the maximum on [2, u_max] and its location")

    sp = sub.add_parser("table1", help="reproduce the small-y reference table")
    sp.add_argument("--format", choices=["csv", "text", "json"], default="csv")
    sp.add_argument("--cap", type=int, default=DEFAULT_EXHAUSTIVE_CAP)
    sp.add_argument("--parallelism", type=int, default=1)
    sp.add_argument("--out", default=None)

    sp = sub.add_parser("bound", help="evaluate one upper bound at (x, y)")
    sp.add_argument("--kind", choices=["elementary", "bonferroni", "selberg",
                                       "large-y", "selberg-sweep"], required=True)
    sp.add_argument("--x", type=float)
    sp.add_argument("--y", type=float)
    sp.add_argument("--epsilon", type=float, default=None)
    sp.add_argument("--target", type=float, default=0.6)
    sp.add_argument("--y-lo", type=int, default=241, help="sweep start (selberg-sweep)")
    sp.add_argument("--y-hi", type=int, default=500_000, help="sweep end (selberg-sweep)")
    sp.add_argument("--out", default=None)

    sp = sub.add_parser("verify", help="run region verifiers and emit a certificate report")
    sp.add_argument("--region", choices=["small-y", "mid-y", "selberg", "small-u",
                                         "iteration", "all"], default="all")
    sp.add_argument("--target", type=float, default=0.6)
    sp.add_argument("--format", choices=["json", "text", "csv"], default="text")
    sp.add_argument("--exhaustive-cap", type=int, default=30_000_000)
    sp.add_argument("--small-u-cap", type=int, default=500)
    sp.add_argument("--paper-scale", action="store_true",
                    help="raise the exhaustive small-u cap to 1100 (hours-scale run)")
    sp.add_argument("--parallelism", type=int, default=1)
    sp.add_argument("--quad-tol", type=float, default=1e-12)
    sp.add_argument("--sieve-limit", type=int, default=None)
    sp.add_argument("--out", default=None)

    sp = sub.add_parser("plot-data", help="emit CSV sample data")
    sp.add_argument("--kind", choices=["omega", "ratio-map"], default="omega")
    sp.add_argument("--u-lo", type=float, default=1.0)
    sp.add_argument("--u-hi", type=float, default=8.0)
    sp.add_argument("--step", type=float, default=1e-3)
    sp.add_argument("--y-set", default="3,5,11,29,101",
                    help="comma-separated y values (ratio-map)")
    sp.add_argument("--u-step", type=float, default=0.25, help="u grid step (ratio-map)")
    sp.add_argument("--out", default=None)
    return p


def _cmd_phi(args) -> int:
    limit = max(2, int(args.y) + 1, math.isqrt(args.x) + 1)
    if args.method in ("two-prime", "all"):
        limit = max(limit, args.x)
    table = build_prime_table(limit)
    if args.method == "all":
        q = table.next_prime(args.y) if args.y >= 2 else 2
        results = {
            "direct": phi_direct(args.x, args.y, table, cap=args.cap),
            "legendre": phi_legendre(args.x, args.y, table),
        }
        if args.y >= 2 and args.y * args.y <= args.x < q ** 3:
            results["two-prime"] = phi_two_prime(args.x, args.y, table)
        if len(set(results.values())) != 1:
            print("method disagreement (this is a bug):", file=sys.stderr)
            for k, v in results.items():
                print(f"  {k}: {v}", file=sys.stderr)
            return EXIT_VERIFICATION
        print(next(iter(results.values())))
        return EXIT_OK
    if args.method == "direct":
        print(phi_direct(args.x, args.y, table, cap=args.cap))
    elif args.method == "legendre":
        print(phi_legendre(args.x, args.y, table))
    else:
        print(phi_two_prime(args.x, args.y, table))
    return EXIT_OK


def _cmd_omega(args) -> int:
    table = build_omega(args.u_max, args.tol)
    print(repr(table.omega(args.u)))
    if args.extremum:
        u_star, m0 = locate_extremum(table)
        print(f"max {m0!r} at u = {u_star!r}")
    return EXIT_OK


def _cmd_table1(args) -> int:
    from .pipeline import verify_small_y
    table = build_prime_table(300)
    cert = verify_small_y(0.6, table, cap=args.cap, parallelism=args.parallelism)
    out, close = _open_out(args.out)
    try:
        if args.format == "json":
            import json
            json.dump(cert.rows, out, indent=2)
            out.write("\n")
        elif args.format == "text":
            out.write(f"{'interval':<12} {'x bound':>10} {'max':>9}\n")
            for r in cert.rows:
                out.write(f"[{r['y_lo']},{r['y_hi']}){'':<4} {r['x_bound']:>10} {r['max_stat']:>9.5f}\n")
        else:
            out.write("y_lo,y_hi,x_bound,max\n")
            for r in cert.rows:
                out.write(f"{r['y_lo']},{r['y_hi']},{r['x_bound']},{r['max_stat']:.5f}\n")
    finally:
        if close:
            out.close()
    return EXIT_OK if cert.verified else EXIT_VERIFICATION


def _cmd_bound(args) -> int:
    if args.kind == "selberg-sweep":
        table = build_prime_table(args.y_hi + 1000)
        rows = selberg_sweep(table, lo=args.y_lo, hi=args.y_hi, target=args.target)
        out, close = _open_out(args.out)
        try:
            out.write("y,epsilon,f_value,coefficient,margin\n")
            for r in rows:
                out.write(f"{r.y},{r.epsilon:.6f},{r.f_value:.8f},"
                          f"{r.coefficient:.8f},{r.margin:.8f}\n")
        finally:
            if close:
                out.close()
        return EXIT_OK
    if args.kind == "large-y":
        if args.y is None:
            raise DomainError("--y is required for --kind large-y")
        ctx = AnalyticContext()
        print(f"factor {closed_form_factor(args.y, ctx)!r}")
        print(f"coefficient {final_large_y_bound(args.y, ctx)!r}")
        return EXIT_OK
    if args.x is None or args.y is None:
        raise DomainError(f"--x and --y are required for --kind {args.kind}")
    table = build_prime_table(max(300, int(args.y) + 1000))
    if args.kind == "elementary":
        print(f"bound {elementary_bound(args.x, args.y, table)!r}")
        print(f"x_bound {elementary_x_bound(args.y, args.target, table)}")
    elif args.kind == "bonferroni":
        val, data = bonferroni_bound(args.x, args.y, table)
        print(f"bound {val!r}")
        print(f"s_y {data.s_y!r}")
        print(f"b_y {data.b_y}")
        print(f"x_bound {bonferroni_x_bound(args.y, args.target, table)}")
    else:  # selberg
        eps = args.epsilon if args.epsilon is not None else optimize_epsilon(args.x, args.y, table)
        cfg = make_sieve_config(args.x, args.y, table, eps)
        val = selberg_upper(args.x, args.y, cfg, table)
        print(f"epsilon {eps!r}")
        print(f"f_value {cfg.f_value!r}")
        print(f"bound {val!r}")
        print(f"coefficient {val * math.log(args.y) / args.x!r}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    regions: tuple[str, ...]
    if args.region == "all":
        regions = REGION_ORDER
    elif args.region == "selberg":
        regions = (SELBERG_FINITE, SELBERG_CLOSED)
    else:
        regions = (args.region,)
    config = PipelineConfig(
        target=args.target,
        exhaustive_cap=args.exhaustive_cap,
        small_u_cap=args.small_u_cap,
        paper_scale=args.paper_scale,
        parallelism=args.parallelism,
        quadrature_tol=args.quad_tol,
        sieve_limit=args.sieve_limit,
        regions=regions,
    )
    report = run_full_pipeline(config)
    out, close = _open_out(args.out)
    try:
        if args.format == "json":
            out.write(report.to_json(indent=2) + "\n")
        elif args.format == "csv":
            out.write(report.to_csv() + "\n")
        else:
            out.write(report.to_text() + "\n")
    finally:
        if close:
            out.close()
    return EXIT_OK if report.verdict else EXIT_VERIFICATION


def _cmd_plot_data(args) -> int:
    out, close = _open_out(args.out)
    try:
        if args.kind == "omega":
            table = build_omega(max(16.0, args.u_hi), 1e-10)
            out.write("u,omega\n")
            for u, w in omega_samples(table, args.u_lo, args.u_hi, args.step):
                out.write(f"{u:.6f},{w:.12f}\n")
        else:
            ys = [float(v) for v in args.y_set.split(",")]
            table = build_prime_table(max(300, int(max(ys)) + 10))
            out.write("y,u,ratio\n")
            for y in ys:
                u = 2.0
                while u <= 3.0 + 1e-12:
                    x = int(y ** u)
                    val = phi_direct(x, y, table) * math.log(y) / x
                    out.write(f"{y:g},{u:.4f},{val:.8f}\n")
                    u += args.u_step
    finally:
        if close:
            out.close()
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "phi": _cmd_phi,
        "omega": _cmd_omega,
        "table1": _cmd_table1,
        "bound": _cmd_bound,
        "verify": _cmd_verify,
        "plot-data": _cmd_plot_data,
    }
    try:
        return handlers[args.command](args)
    except ResourceError as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
