"""Run the cone verifier over every shipped cone fixture.

    python3 scripts/verify_cones.py [--samples 100] [--grid-depth 4] [--seed 0] [--workers 1] [--out DIR]

Good fixtures should report verdict true; the bad_cone_* fixtures should
report verdict false with a witness pair of sample points.
"""

import argparse
import json
import sys
import time
from pathlib import Path

from nilcone.cli import dump_json, fixture_dir
from nilcone.cone import ConeRunConfig, NilpotentCone, run_cone


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=100)
    ap.add_argument("--grid-depth", type=int, default=4)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", type=Path, help="directory for the JSON reports")
    args = ap.parse_args()
    cfg = ConeRunConfig(args.samples, args.grid_depth, args.seed, args.workers)
    unexpected = 0
    for path in sorted(fixture_dir().glob("*cone_*.json")):
        cone = NilpotentCone.from_json(json.loads(path.read_text()))
        start = time.perf_counter()
        report = run_cone(cone, cfg)
        expected = not path.name.startswith("bad_")
        unexpected += report.verdict != expected
        label = report.label["case"] if report.label else "-"
        print(
            f"{path.stem:40} n={len(report.samples):4} valid={report.diagnostics['valid']!s:5} "
            f"verdict={report.verdict!s:5} case={label:9} {time.perf_counter() - start:5.1f}s"
        )
        if args.out:
            args.out.mkdir(parents=True, exist_ok=True)
            (args.out / f"{path.stem}.report.json").write_text(dump_json(report.to_json()))
    print(f"{unexpected} unexpected verdicts")
    return 1 if unexpected else 0


if __name__ == "__main__":
    sys.exit(main())
