"""Compare the algorithm with the brute-force oracle on seeded random instances."""

from __future__ import annotations

import sys
import time

from lfcuts import mixed_integer_hull_facets, oracle_facets
from lfcuts.corpus import random_instance


def main(count: int = 20) -> int:
    bad = 0
    for seed in range(count):
        inst = random_instance(seed)
        t0 = time.perf_counter()
        alg = mixed_integer_hull_facets(inst)
        t1 = time.perf_counter()
        rep = oracle_facets(inst, radius=6)
        t2 = time.perf_counter()
        same = rep.stable and alg.same_facets(rep.facets)
        bad += not same
        print(f"seed {seed:3d}  k={inst.k}  facets {len(alg.nontrivial):2d}  window {rep.radius:3d}  "
              f"{'ok ' if same else 'DIFF'}  alg {t1 - t0:.2f}s  oracle {t2 - t1:.2f}s")
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main(int(sys.argv[1]) if len(sys.argv) > 1 else 20))
