#!/usr/bin/env python3
"""Certify Hall-interval targets: Mordell-Gruber segment values and
first-quadrant ray values, each re-evaluated independently from the emitted
witness sequence."""

import argparse
from fractions import Fraction

from latspec.apps import app2_hall_ray_certify, app2_kappa_plus_window
from latspec.exact import float_of
from latspec.mg2 import CONSTANTS, mg2_hall_certify, mordell_constant_window


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--segment-targets", default="0.966,0.97,0.985,0.998")
    ap.add_argument("--ray-targets", default="10.61,12,100")
    ap.add_argument("--tol", default="1e-9")
    args = ap.parse_args()
    tol = Fraction(args.tol)

    print(f"MG2 Hall segment starts at {float_of(CONSTANTS.hall_segment_lo):.9f}")
    for spec in args.segment_targets.split(","):
        target = Fraction(spec)
        wit = mg2_hall_certify(target, tol)
        window = len(wit.sequence.right.head) + len(wit.sequence.left.head) + 4
        enc = mordell_constant_window(wit.sequence, window, depth=80)
        print(f"  target {float(target):.9f}: a0={wit.a0} a-1={wit.am1} "
              f"value={float_of(wit.value):.12f} recheck={float_of(enc.midpoint()):.12f}")
        print(f"    witness: {wit.sequence.as_json()}")

    print("\nfirst-quadrant Hall ray:")
    for spec in args.ray_targets.split(","):
        target = Fraction(spec)
        wit = app2_hall_ray_certify(target, tol)
        window = len(wit.sequence.right.head) + len(wit.sequence.left.head) + 4
        enc = app2_kappa_plus_window(wit.sequence, window, depth=80)
        print(f"  target {float(target):.6f}: a0={wit.a0} "
              f"value={float_of(wit.value):.10f} recheck={float_of(enc.midpoint()):.10f}")


if __name__ == "__main__":
    main()
