#!/usr/bin/env python3
"""Taylor remainder norms against ||K|| and the implied trace constants."""
import argparse

import numpy as np

from opint.funkit import library
from opint.matcore import op_norm
from opint.moi import loglog_slope
from opint.rng import CounterRNG
from opint.shift import remainder_trace_bound, taylor_remainder


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=5)
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--f", default="exp")
    args = ap.parse_args()

    f = library(args.f)
    scales = np.logspace(-1, -3, 5)
    rng = CounterRNG(args.seed)
    for m in (1, 2, 3):
        slopes, consts = [], []
        for t in range(args.trials):
            r = rng.substream(100 * m + t)
            A, K = r.hermitian(args.n), r.hermitian(args.n)
            slopes.append(loglog_slope(scales, [op_norm(taylor_remainder(f, A, s * K, m)) for s in scales]))
            consts.append(remainder_trace_bound(f, A, K, m).ratio)
        print(f"m={m}: slope min {min(slopes):.3f} median {np.median(slopes):.3f}; "
              f"constant max {max(consts):.4f} median {np.median(consts):.4f}")


if __name__ == "__main__":
    main()
