#!/usr/bin/env python3
"""Run the full verification pipeline and print the certificate report.

Usage: python scripts/run_verification.py [--parallelism N] [--paper-scale]
Exit status 0 iff every region verifies.
"""

import argparse
import sys
import time

from roughbound.pipeline import PipelineConfig, run_full_pipeline


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--parallelism", type=int, default=1)
    ap.add_argument("--paper-scale", action="store_true",
                    help="exhaustive small-u sweep to y = 1100 (hours-scale)")
    ap.add_argument("--target", type=float, default=0.6)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()

    config = PipelineConfig(target=args.target, parallelism=args.parallelism,
                            paper_scale=args.paper_scale)
    t0 = time.time()
    report = run_full_pipeline(config)
    elapsed = time.time() - t0
    if args.json:
        print(report.to_json(indent=2))
    else:
        print(report.to_text())
        print(f"elapsed: {elapsed:.1f}s")
    return 0 if report.verdict else 1


if __name__ == "__main__":
    sys.exit(main())
