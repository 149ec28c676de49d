#!/usr/bin/env python3
"""Operator Holder ratios ||f(A) - f(A+sK)|| / s^alpha for f = |x|^alpha.

Prints the sup over trials at each scale s and the trend as alpha -> 1.
"""
import argparse
import json

from opint.xcli.config import ExperimentConfig
from opint.xcli.suites import holder_experiment


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=6)
    ap.add_argument("--trials", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--alpha", type=float, default=0.5)
    ap.add_argument("--out", help="optional JSON report path")
    args = ap.parse_args()

    rep = holder_experiment(ExperimentConfig("holder", n=args.n, trials=args.trials, seed=args.seed,
                                             alpha=args.alpha))
    print("scale       sup ratio")
    for s, v in rep.aggregate["sup_by_scale"].items():
        print(f"{s:>8}   {v:.6f}")
    print("alpha trend:", json.dumps(rep.aggregate["alpha_trend"]))
    print("PASS" if rep.passed else f"FAIL {rep.failures}")
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(rep.dumps() + "\n")


if __name__ == "__main__":
    main()
