"""Compare the kernel/image weight filtration with the sl2 route on random
exact conjugates of catalog representatives.

    python3 scripts/weight_filtration_oracle.py [--count 200] [--dim-max 8] [--seed 1]
"""

import argparse
import random
import sys
from collections import Counter

from nilcone.nilpotent import weight_filtration, weight_filtration_sl2
from nilcone.orbits import catalog, construct_representative
from nilcone.sampling import random_conjugate


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--dim-max", type=int, default=8)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    entries = [e for e in catalog(args.dim_max) if any(e.label.invariants.m[1:])]
    tally, bad = Counter(), 0
    for i in range(args.count):
        e = rng.choice([x for x in entries if x.k % 2 == i % 2])
        inv = e.label.invariants
        _, N = construct_representative(inv.m, inv.s_map, e.k)
        N = random_conjugate(N, rng)
        wf = weight_filtration(N)
        ok = not wf.check() and wf == weight_filtration_sl2(N)
        bad += not ok
        tally[(e.dim, "skew" if e.k % 2 else "sym")] += 1
        if not ok:
            print(f"mismatch: {inv.to_json()} k={e.k}")
    for (dim, kind), c in sorted(tally.items()):
        print(f"dim {dim} {kind:4} {c:4}")
    print(f"{args.count} nilpotents, {bad} mismatches")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
