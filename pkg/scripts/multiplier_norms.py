#!/usr/bin/env python3
"""Schur multiplier norm estimates for divided-difference kernels.

Compares the default factorization bound with the sampling-series
factorization for band-limited f; both upper bounds should stay below
the band-limit constant times ||f||_inf.
"""
import argparse

import numpy as np

from opint.doi import bandlimited_factorization, haagerup_upper, multiplier_bounds
from opint.funkit import dd_kernel2, library
from opint.rng import CounterRNG


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[4, 8, 16])
    ap.add_argument("--spread", type=float, default=6.0, help="half-width of the random spectra")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    f = library("sin")
    rng = CounterRNG(args.seed)
    print(f"{'n':>4} {'lower':>8} {'default':>8} {'series':>8}")
    for n in args.sizes:
        xs = np.sort(rng.uniform(n) * 2 * args.spread - args.spread)
        ys = np.sort(rng.uniform(n) * 2 * args.spread - args.spread)
        k = dd_kernel2(f, xs, ys)
        lo, hi = multiplier_bounds(k, trials=100, seed=args.seed)
        series = haagerup_upper(*bandlimited_factorization(f, xs, ys))
        print(f"{n:4d} {lo:8.4f} {hi:8.4f} {series:8.4f}")


if __name__ == "__main__":
    main()
