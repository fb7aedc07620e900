"""Regenerate the JSON fixtures shipped in src/nilcone/fixtures.

    python3 scripts/make_fixtures.py [--out DIR]
"""

import argparse
from pathlib import Path

from nilcone.cli import catalog_counts, catalog_document, dump_json, representative_document
from nilcone.cone import adversarial_cones, fixture_cones
from nilcone.hodge import HodgeFlag
from nilcone.linalg import Matrix
from nilcone.scalars import I

DEFAULT_OUT = Path(__file__).resolve().parent.parent / "src" / "nilcone" / "fixtures"


def slug(name: str) -> str:
    return "".join(c if c.isalnum() else "_" for c in name).strip("_").lower()


def pure_hs():
    # weight 2, h = (1, 1, 1): V^{2,0} = <e1 + i e2>, V^{1,1} = <e3>
    Q = Matrix.diag([-1, -1, 1])
    F = HodgeFlag.from_vectors(2, {1: [[1, I, 0], [0, 0, 1]], 2: [[1, I, 0]]}, 3)
    return {"space": {"dim": 3, "k": 2, "Q": Q.to_json()}, "N": Matrix.zeros(3, 3).to_json(), "flag": F.to_json()}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", type=Path, default=DEFAULT_OUT)
    args = ap.parse_args()
    out = args.out
    out.mkdir(parents=True, exist_ok=True)

    def write(name, obj):
        (out / f"{name}.json").write_text(dump_json(obj))
        print("wrote", out / f"{name}.json")

    elliptic = representative_document([0, 1], {1: (1, 0)}, 1)
    write("elliptic", elliptic)
    flipped = dict(elliptic)
    flipped["space"] = dict(elliptic["space"], Q=(-Matrix.from_json(elliptic["space"]["Q"])).to_json())
    write("elliptic_flipped", flipped)
    write("pure_hs", pure_hs())
    write("zero_weight1", representative_document([2, 0], {1: (0, 0)}, 1))
    for cone in fixture_cones():
        write("cone_" + slug(cone.name), cone.to_json())
    for cone in adversarial_cones():
        write("bad_cone_" + slug(cone.name), cone.to_json())
    write("catalog_counts", catalog_counts(catalog_document(8, "all")))


if __name__ == "__main__":
    main()
