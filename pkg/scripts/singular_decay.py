#!/usr/bin/env python3
"""Weighted singular values of f(A) - f(B) for Holder f, across sizes n.

For each n the observed constant max_j s_j (1+j)^(alpha/p) / ||A-B||_p^alpha
is summarized over seeded trials; a flat median across n is the expected shape.
"""
import argparse

from opint.xcli.config import ExperimentConfig
from opint.xcli.suites import singular_decay_experiment


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[4, 8, 16, 32])
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--alpha", type=float, default=0.5)
    ap.add_argument("--p", type=float, default=2.0)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print(f"{'n':>4} {'median':>10} {'max':>10}  status")
    for n in args.sizes:
        rep = singular_decay_experiment(ExperimentConfig("singular-decay", n=n, trials=args.trials, seed=args.seed,
                                                         alpha=args.alpha, p=args.p))
        print(f"{n:4d} {rep.aggregate['median_constant']:10.4f} {rep.aggregate['max_constant']:10.4f}  "
              f"{'PASS' if rep.passed else 'FAIL'}")


if __name__ == "__main__":
    main()
