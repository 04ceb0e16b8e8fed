#!/usr/bin/env python3
"""Print the lower part of the Mordell-Gruber spectrum, the classification
check and the Markov gap scan."""

import argparse

from latspec.exact import float_of, format_exact
from latspec.mg2 import classify_low_spectrum, lower_part_table, perron_gap_search


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--t-max", type=int, default=6)
    ap.add_argument("--max-period", type=int, default=6)
    ap.add_argument("--max-entry", type=int, default=3)
    args = ap.parse_args()

    print("lower part of MG2:")
    for row in lower_part_table(args.t_max):
        print(f"  {row.label:28s} {format_exact(row.value):>16s}   {row.decimal:.12f}")

    rep = classify_low_spectrum(args.max_period, args.max_entry)
    print(f"\nclassification over {rep.checked} necklaces "
          f"(period <= {args.max_period}, entries <= {args.max_entry}): "
          f"{'consistent' if rep.consistent else 'VIOLATED'}")
    for period, val in rep.below:
        print(f"  below (1+sqrt5)/4: {period}  ->  {format_exact(val)} = {float_of(val):.9f}")

    gap = perron_gap_search(args.max_period, 4)
    print(f"\nMarkov gap scan over {gap.checked} necklaces: "
          f"interior {'empty' if gap.empty_interior else 'NOT EMPTY'}")
    print(f"  sqrt12 witnesses: {gap.left_witnesses}")
    print(f"  sqrt13 witnesses: {gap.right_witnesses}")


if __name__ == "__main__":
    main()
