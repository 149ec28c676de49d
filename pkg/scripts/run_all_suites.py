#!/usr/bin/env python3
"""Run every verification suite once and write the JSON reports to a directory."""
import argparse
import os

from opint.xcli.config import SUITE_NAMES, ExperimentConfig
from opint.xcli.suites import run_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=5)
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--outdir", default="reports")
    args = ap.parse_args()

    os.makedirs(args.outdir, exist_ok=True)
    failed = 0
    for suite in SUITE_NAMES:
        rep = run_suite(ExperimentConfig(suite, n=args.n, trials=args.trials, seed=args.seed))
        with open(os.path.join(args.outdir, f"{suite}.json"), "w") as fh:
            fh.write(rep.dumps() + "\n")
        failed += not rep.passed
        print(f"{suite:18s} {'PASS' if rep.passed else 'FAIL'}  {rep.wall_time:6.2f} s")
    raise SystemExit(1 if failed else 0)


if __name__ == "__main__":
    main()
