"""For the rank-5 coray scenario, decide which torsion-free objects lie in E
and print the obstruction growth for the ones that do not."""
import argparse

from univext.extensions import admits_universal_extension
from univext.scenarios import load_scenario
from univext.torsion import free_members


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--cap", type=int, default=6)
    args = ap.parse_args()
    pair = load_scenario("tube5-case2-paper").with_overrides(cap=max(args.cap, 5)).pair
    for f in free_members(pair, args.cap):
        d = admits_universal_extension(pair, f)
        if d:
            print(f"{f}: in E ({d.reason}); c{f} = {d.witness.middle}")
        else:
            grow = ", ".join(f"L={b}: {m}" for b, m in d.witness.growth)
            print(f"{f}: not in E; truncated middles {grow}")


if __name__ == "__main__":
    main()
