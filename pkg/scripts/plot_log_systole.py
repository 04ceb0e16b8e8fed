#!/usr/bin/env python3
"""Emit (t, W, W2) profile data for a periodic index sequence.

Writes CSV to stdout; with --png also renders the two curves (needs
matplotlib, which is not a package dependency).
"""

import argparse
import csv
import sys

from latspec.cfrac import BiSeq
from latspec.lattice import reconstruct_biinfinite
from latspec.systole import profile_rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--period", default="2,1", help="comma-separated period, e.g. 2,1")
    ap.add_argument("--t-lo", type=float, default=-3.0)
    ap.add_argument("--t-hi", type=float, default=3.0)
    ap.add_argument("--step", type=float, default=0.005)
    ap.add_argument("--png", default=None, help="optional output image path")
    args = ap.parse_args()

    period = [int(x) for x in args.period.split(",")]
    lat, _ = reconstruct_biinfinite(BiSeq.from_period(period), 64)
    rows = profile_rows(lat, args.t_lo, args.t_hi, args.step)

    w = csv.writer(sys.stdout)
    w.writerow(("t", "W", "W2"))
    for t, wv, w2 in rows:
        w.writerow((f"{t:.6f}", f"{wv:.12f}", f"{w2:.12f}"))

    if args.png:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        ts = [r[0] for r in rows]
        plt.figure(figsize=(9, 4))
        plt.plot(ts, [r[1] for r in rows], "r-", lw=1, label="W")
        plt.plot(ts, [r[2] for r in rows], "b-", lw=1, label="W2")
        plt.xlabel("t")
        plt.legend()
        plt.title(f"log-systole functions of ({args.period}) periodic lattice")
        plt.tight_layout()
        plt.savefig(args.png, dpi=150)
        print(f"wrote {args.png}", file=sys.stderr)


if __name__ == "__main__":
    main()
