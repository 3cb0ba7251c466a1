"""Run every verifier over all torsion pairs of A_1 .. A_n and print a timing table."""
import argparse
import time

from univext.equivalence import pushout_batch, verify_equivalence, verify_ff_corollary, verify_lwc_triple, wakamatsu_batch
from univext.torsion import MAX_ENUMERATION_N, enumerate_torsion_pairs, verify_torsion_pair

VERIFIERS = {
    "torsion": verify_torsion_pair,
    "equiv": verify_equivalence,
    "ff": verify_ff_corollary,
    "lwc": verify_lwc_triple,
    "wakamatsu": wakamatsu_batch,
    "pushout": pushout_batch,
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=4, help=f"largest n (<= {MAX_ENUMERATION_N})")
    args = ap.parse_args()
    print(f"{'n':>2} {'pairs':>6} " + " ".join(f"{k:>10}" for k in VERIFIERS) + f" {'seconds':>8}")
    for n in range(1, args.n + 1):
        t0 = time.perf_counter()
        pairs = enumerate_torsion_pairs(n)
        fails = {k: sum(not v(p).passed for p in pairs) for k, v in VERIFIERS.items()}
        cells = " ".join(f"{fails[k]:>10}" for k in VERIFIERS)
        print(f"{n:>2} {len(pairs):>6} {cells} {time.perf_counter() - t0:>8.2f}")
    print("cells count failing pairs")


if __name__ == "__main__":
    main()
