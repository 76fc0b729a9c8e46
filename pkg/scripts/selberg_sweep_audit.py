#!/usr/bin/env python3
"""Dump the per-prime-pair sieve sweep as CSV for auditing.

Columns: y, epsilon, f_value, coefficient, margin.  The coefficient is the
bound normalized by x / log q at x = y^7.5; a positive margin means the pair
beats the target.

Usage: python scripts/selberg_sweep_audit.py [out.csv] [--lo P] [--hi P]
"""

import argparse
import sys

from roughbound.primes import build_prime_table
from roughbound.sieve_bounds import selberg_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("out", nargs="?", default="-")
    ap.add_argument("--lo", type=int, default=241)
    ap.add_argument("--hi", type=int, default=500_000)
    ap.add_argument("--target", type=float, default=0.6)
    args = ap.parse_args()

    table = build_prime_table(args.hi + 1000)
    rows = selberg_sweep(table, lo=args.lo, hi=args.hi, target=args.target)
    out = sys.stdout if args.out == "-" else open(args.out, "w")
    try:
        out.write("y,epsilon,f_value,coefficient,margin\n")
        for r in rows:
            out.write(f"{r.y},{r.epsilon:.6f},{r.f_value:.8f},{r.coefficient:.8f},{r.margin:.8f}\n")
    finally:
        if out is not sys.stdout:
            out.close()
    worst = min(rows, key=lambda r: r.margin)
    print(f"pairs: {len(rows)}  min margin: {worst.margin:.6f} at y={worst.y}", file=sys.stderr)
    return 0 if worst.margin > 0 else 1


if __name__ == "__main__":
    sys.exit(main())
