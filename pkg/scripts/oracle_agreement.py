"""Closed-form Hom/Ext dimensions against the GF(p) oracle, with mismatch counts per category."""
import argparse
import time

from univext.category import LinearA, Tube, ext_dim, hom_dim, list_indecomposables
from univext.oracle import ext_complex_dim, intertwiner_dim, realize


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--length", type=int, default=8)
    ap.add_argument("--primes", type=int, nargs="+", default=[101, 103])
    args = ap.parse_args()
    for p in args.primes:
        specs = [Tube(r, max(args.length, r), p) for r in range(2, 6)] + [LinearA(n, p) for n in range(1, 6)]
        for spec in specs:
            t0 = time.perf_counter()
            ind = list_indecomposables(spec, cap=args.length) if isinstance(spec, Tube) else list_indecomposables(spec)
            reps = {m: realize(spec, m) for m in ind}
            bad = sum(
                hom_dim(spec, a, b) != intertwiner_dim(reps[a], reps[b])
                or ext_dim(spec, a, b) != ext_complex_dim(reps[a], reps[b])
                for a in ind
                for b in ind
            )
            print(f"p={p} {str(spec):<22} pairs={len(ind) ** 2:<5} mismatches={bad} {time.perf_counter() - t0:.2f}s")


if __name__ == "__main__":
    main()
