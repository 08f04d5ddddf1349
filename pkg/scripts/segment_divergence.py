#!/usr/bin/env python3
"""Sweep the discretized segment potential over atom counts and angles,
showing the vertical/horizontal dichotomy: the sup grows like ln(m) for any
non-horizontal segment and stays bounded for horizontal ones."""
import argparse
import math

from cclab.cli import segment_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--angles-deg", type=float, nargs="+", default=[90, 60, 30, 5, 0])
    ap.add_argument("--m-list", type=int, nargs="+", default=[100, 1000, 10000])
    args = ap.parse_args()

    print(f"{'angle':>6} " + " ".join(f"{('m=' + str(m)):>12}" for m in args.m_list)
          + f" {'per-decade':>11}")
    for deg in args.angles_deg:
        rows = segment_sweep(math.radians(deg), args.m_list)
        sups = [r["sup"] for r in rows]
        growth = (sups[-1] - sups[0]) / max(len(sups) - 1, 1)
        print(f"{deg:6.1f} " + " ".join(f"{s:12.4f}" for s in sups) + f" {growth:11.4f}")


if __name__ == "__main__":
    main()
