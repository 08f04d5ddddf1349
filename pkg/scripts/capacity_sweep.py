#!/usr/bin/env python3
"""Sweep capacity bounds over several contraction factors and print a table
comparing both bounds against (sum theta_j)^{-1}."""
import argparse
import time

from cclab.capacity import bounds
from cclab.geometry import CantorSpec


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=1)
    ap.add_argument("--kmax", type=int, default=4)
    ap.add_argument("--lambdas", type=float, nargs="+", default=[0.25, 1 / 3, 0.3])
    ap.add_argument("--tol", type=float, default=None)
    args = ap.parse_args()

    print(f"{'lam':>8} {'k':>2} {'lower':>10} {'upper':>10} {'1/sum':>10} "
          f"{'r_lo':>7} {'r_up':>7} {'sec':>6}")
    for lam in args.lambdas:
        spec = CantorSpec(n=args.n, lambdas=lam)
        for k in range(args.kmax + 1):
            t0 = time.time()
            b = bounds(spec, k, args.tol)
            print(f"{lam:8.4f} {k:2d} {b.lower:10.5f} {b.upper:10.5f} "
                  f"{b.theta_sum_inv:10.5f} {b.ratio_lower:7.3f} {b.ratio_upper:7.3f} "
                  f"{time.time() - t0:6.1f}")


if __name__ == "__main__":
    main()
