"""Bongartz then minimalize for the rank-5 rays scenario, object by object along the ray at 4."""
import argparse

from univext.category import Indec
from univext.extensions import bongartz_extension, is_universal_extension, minimalize
from univext.oracle import certify_exact
from univext.scenarios import load_scenario


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lengths", type=int, default=8)
    ap.add_argument("--prime", type=int, default=101)
    args = ap.parse_args()
    sc = load_scenario("tube5-case1-paper", args.prime).with_overrides(cap=args.lengths + 4)
    pair = sc.pair
    for l in range(1, args.lengths + 1):
        y = Indec(4, l)
        raw = bongartz_extension(pair, y)
        ue = minimalize(raw, pair)
        ok = certify_exact(ue.seq).ok and is_universal_extension(ue.seq, pair).ok
        print(f"l={l:<2} bongartz middle {str(raw.middle):<28} minimal {ue}  certified={ok}")


if __name__ == "__main__":
    main()
