#!/usr/bin/env python3
"""Exhaustive small-u sweep at full scale: 241 <= y <= 1100, y^2 <= x < y^3.

This is the hours-scale run deliberately kept out of CI (x reaches about
1.33e9 near the top).  It prints per-interval maxima as it goes and the
overall maximum at the end, which should stay below .56404.

Usage: python scripts/small_u_paper_scale.py [--cap 1100] [--parallelism N]
"""

import argparse
import sys
import time

from roughbound.pipeline import verify_small_u
from roughbound.primes import build_prime_table


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--cap", type=int, default=1100)
    ap.add_argument("--parallelism", type=int, default=1)
    args = ap.parse_args()

    table = build_prime_table(2 * args.cap + 100)
    t0 = time.time()
    cert = verify_small_u(table, y_exhaustive_cap=args.cap, parallelism=args.parallelism)
    for row in cert.rows:
        if "y_lo" in row:
            print(f"[{row['y_lo']},{row['y_hi']}): max ratio {row['max_ratio']:.6f} "
                  f"at n={row['witness_n']}")
    print(f"exhaustive max: {cert.params['exhaustive_max']:.6f} "
          f"(milestone {cert.params['exhaustive_milestone']})")
    print(f"analytic grid max: {cert.params['analytic_max']:.6f} "
          f"(milestone {cert.params['analytic_milestone']})")
    print(f"verified: {cert.verified}   elapsed {time.time() - t0:.0f}s")
    return 0 if cert.verified else 1


if __name__ == "__main__":
    sys.exit(main())
