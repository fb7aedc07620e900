"""Count real nilpotent classes per (dim, k, signature of Q) and compare with
an independent signed-Young-diagram enumeration.

    python3 scripts/catalog_counts.py [--dim-max 8] [--out counts.json]
"""

import argparse
import sys
from collections import Counter
from pathlib import Path

from nilcone.cli import catalog_counts, catalog_document, dump_json


def signed_young_counts(dim, k):
    """Rows (length, leading sign) with alternating signs; rows whose length
    has the paired parity occur in +/- pairs."""
    symmetric = k % 2 == 0
    rows = []
    for length in range(1, k + 2):
        if (length % 2 == 0) == symmetric:
            rows.append((length, "pair"))
        else:
            rows += [(length, "+"), (length, "-")]
    out = Counter()

    def boxes(r):
        return 2 * r[0] if r[1] == "pair" else r[0]

    def plus(r):
        length, s = r
        if s == "pair":
            return length
        return (length + 1) // 2 if s == "+" else length // 2

    def rec(i, remaining, p):
        if remaining == 0:
            out[(p, dim - p) if symmetric else None] += 1
            return
        if i == len(rows):
            return
        for c in range(remaining // boxes(rows[i]) + 1):
            rec(i + 1, remaining - c * boxes(rows[i]), p + c * plus(rows[i]))

    rec(0, dim, 0)
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dim-max", type=int, default=8)
    ap.add_argument("--out", type=Path)
    args = ap.parse_args()
    counts = catalog_counts(catalog_document(args.dim_max, "all"))
    mismatches = 0
    print(f"{'dim':>3} {'k':>2} {'sig(Q)':>8} {'classes':>8} {'oracle':>7}")
    for row in counts:
        sig = tuple(row["q_signature"]) if row["q_signature"] else None
        oracle = signed_young_counts(row["dim"], row["k"])[sig]
        mismatches += oracle != row["count"]
        print(f"{row['dim']:>3} {row['k']:>2} {str(sig or 'skew'):>8} {row['count']:>8} {oracle:>7}")
    total = sum(r["count"] for r in counts)
    print(f"total {total} classes, {mismatches} mismatches")
    if args.out:
        args.out.write_text(dump_json(counts))
    return 1 if mismatches else 0


if __name__ == "__main__":
    sys.exit(main())
