#!/usr/bin/env python3
"""Generate the pi/theta checkpoint fixture with an independent sieve.

This deliberately avoids the package's numpy-based table: it uses a plain
odd-only bytearray sieve and math.fsum for theta, so the committed CSV is an
independent oracle for regression tests.

Usage: python scripts/make_prime_checkpoints.py [out.csv]
"""

import csv
import math
import sys

CHECKPOINTS = (10, 100, 599, 1426, 10_000, 100_000, 1_000_000, 10_000_000, 30_000_000)


def oracle_primes(limit):
    """Odd-only bytearray sieve, independent of the package implementation."""
    if limit < 2:
        return []
    size = (limit - 1) // 2  # odds 3, 5, ..., representing 2k+3
    sieve = bytearray([1]) * size
    for i in range(int(limit ** 0.5) // 2 + 1):
        if sieve[i]:
            p = 2 * i + 3
            start = (p * p - 3) // 2
            sieve[start::p] = bytearray(len(range(start, size, p)))
    return [2] + [2 * i + 3 for i in range(size) if sieve[i]]


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else "tests/data/pi_theta_checkpoints.csv"
    limit = max(CHECKPOINTS)
    print(f"sieving to {limit:,} ...")
    primes = oracle_primes(limit)
    print(f"{len(primes):,} primes")
    logs = []
    rows = []
    k = 0
    for t in sorted(CHECKPOINTS):
        while k < len(primes) and primes[k] <= t:
            logs.append(math.log(primes[k]))
            k += 1
        rows.append((t, k, math.fsum(logs)))
    with open(out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "pi", "theta"])
        for t, pi_t, theta_t in rows:
            w.writerow([t, pi_t, repr(theta_t)])
            print(f"  pi({t:>11,}) = {pi_t:>9,}   theta = {theta_t:.6f}")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
