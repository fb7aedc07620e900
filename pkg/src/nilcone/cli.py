"""Command-line interface.

Exit codes: 0 success or verdict true, 1 verdict false, 2 parse or I/O
error, 3 semantic validation error (N not nilpotent, N not in g, ...).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass
from importlib import resources
from pathlib import Path

from nilcone.cone import ConeRunConfig, NilpotentCone, run_cone
from nilcone.errors import NilconeError
from nilcone.hodge import HodgeFlag, deligne_splitting, is_lmhs, primitive_splitting, representative_flag
from nilcone.nilpotent import NilpotentElement, invariants, weight_filtration, weight_filtration_sl2
from nilcone.orbits import catalog, classify_real, construct_representative, validate_invariants
from nilcone.scalars import encode

SCHEMA_VERSION = 1
EXIT_OK, EXIT_FALSE, EXIT_PARSE, EXIT_SEMANTIC = 0, 1, 2, 3


class ParseError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    input: str | None = None
    output: str | None = None
    samples: int = 100
    grid_depth: int = 4
    seed: int = 0
    format: str = "json"

    def echo(self) -> dict:
        out = asdict(self)
        for key in ("input", "output", "format"):
            out.pop(key)
        return out


# --------------------------------------------------------------------------
# I/O


def fixture_dir() -> Path:
    env = os.environ.get("NILCONE_FIXTURES")
    if env:
        return Path(env)
    return Path(str(resources.files("nilcone") / "fixtures"))


def resolve_input(name: str) -> Path:
    """A path as given, or a bare fixture name looked up in the fixture directory."""
    p = Path(name)
    if p.exists():
        return p
    d = fixture_dir()
    for cand in (d / name, d / f"{name}.json"):
        if cand.exists():
            return cand
    raise ParseError(f"input {name!r} not found (fixture directory: {d})")


def load_json(name: str | None):
    if name is None:
        raise ParseError("--input is required")
    path = resolve_input(name)
    try:
        return json.loads(path.read_text())
    except (OSError, UnicodeDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: malformed JSON: {exc}") from exc


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def render_text(obj, prefix: str = "") -> list[str]:
    """One ``path: value`` line per leaf, keys sorted."""
    if isinstance(obj, dict) and set(obj) == {"re", "im"}:
        return [f"{prefix}: {_gaussian(obj)}"]
    if isinstance(obj, dict):
        if not obj:
            return [f"{prefix}: {{}}"]
        lines = []
        for key in sorted(obj):
            lines += render_text(obj[key], f"{prefix}.{key}" if prefix else str(key))
        return lines
    if isinstance(obj, list):
        if obj and all(_is_scalar(x) for x in obj):
            return [f"{prefix}: [" + ", ".join(_leaf(x) for x in obj) + "]"]
        if not obj:
            return [f"{prefix}: []"]
        lines = []
        for i, x in enumerate(obj):
            lines += render_text(x, f"{prefix}[{i}]")
        return lines
    return [f"{prefix}: {_leaf(obj)}"]


def _is_scalar(x) -> bool:
    return not isinstance(x, (dict, list)) or (isinstance(x, dict) and set(x) == {"re", "im"})


def _gaussian(z) -> str:
    re, im = z["re"], z["im"]
    if im == "0":
        return re
    sign = "" if im.startswith("-") else "+"
    return f"{re}{sign}{im}i" if re != "0" else f"{im}i"


def _leaf(x) -> str:
    if isinstance(x, dict) and set(x) == {"re", "im"}:
        return _gaussian(x)
    if x is None:
        return "null"
    if isinstance(x, bool):
        return "true" if x else "false"
    return str(x)


def emit(obj, cfg: RunConfig) -> None:
    text = dump_json(obj) if cfg.format == "json" else "\n".join(render_text(obj)) + "\n"
    if cfg.output:
        try:
            Path(cfg.output).write_text(text)
        except OSError as exc:
            raise ParseError(f"cannot write {cfg.output}: {exc}") from exc
    else:
        sys.stdout.write(text)


def _wrap(cfg: RunConfig, doc, result, verdict=None) -> dict:
    out = {"schema_version": SCHEMA_VERSION, "command": cfg.command, "config": cfg.echo(), "input": doc, "result": result}
    if verdict is not None:
        out["verdict"] = verdict
    return out


def _parse(fn, doc):
    try:
        return fn(doc)
    except NilconeError:
        raise
    except (KeyError, TypeError, ValueError, AttributeError, IndexError) as exc:
        raise ParseError(f"input does not have the expected shape: {exc!r}") from exc


def _element(doc) -> NilpotentElement:
    return _parse(NilpotentElement.from_json, doc)


def _element_and_flag(doc) -> tuple[NilpotentElement, HodgeFlag]:
    N = _element(doc)
    if "flag" not in doc:
        raise ParseError("input needs a 'flag'")
    return N, _parse(lambda d: HodgeFlag.from_json(d["flag"], N.dim), doc)


# --------------------------------------------------------------------------
# commands


def cmd_classify(cfg: RunConfig):
    doc = load_json(cfg.input)
    N = _element(doc)
    inv = invariants(N)
    label = classify_real(inv.m, inv.s_map, N.k)
    return _wrap(cfg, doc, label.to_json()), EXIT_OK


def cmd_weight_filtration(cfg: RunConfig):
    doc = load_json(cfg.input)
    N = _element(doc)
    wf = weight_filtration(N)
    oracle = weight_filtration_sl2(N) if not N.is_zero() else wf
    result = {
        "k": N.k,
        "dims": wf.dims(),
        "W": {str(i): [[encode(x) for x in r] for r in wf[i].basis] for i in range(2 * N.k + 1)},
        "problems": wf.check(),
        "sl2_agrees": wf == oracle,
    }
    ok = not result["problems"] and result["sl2_agrees"]
    return _wrap(cfg, doc, result, ok), EXIT_OK if ok else EXIT_FALSE


def cmd_deligne(cfg: RunConfig):
    doc = load_json(cfg.input)
    N, F = _element_and_flag(doc)
    wf = weight_filtration(N)
    sp = deligne_splitting(F, wf, N.matrix)
    prim = primitive_splitting(sp, N)
    result = sp.to_json()
    result["dims"] = {f"{p},{q}": d for (p, q), d in sorted(sp.numbers().items())}
    result["primitive_dims"] = {f"{p},{q}": S.dim for (p, q), S in sorted(prim.items()) if S.dim}
    result["real_split"] = sp.real_split()
    return _wrap(cfg, doc, result, sp.ok), EXIT_OK if sp.ok else EXIT_FALSE


def cmd_verify_lmhs(cfg: RunConfig):
    doc = load_json(cfg.input)
    N, F = _element_and_flag(doc)
    rec = is_lmhs(F, N)
    result = rec.to_json()
    return _wrap(cfg, doc, result, rec.verdict), EXIT_OK if rec.verdict else EXIT_FALSE


def cmd_verify_cone(cfg: RunConfig):
    doc = load_json(cfg.input)
    cone = _parse(NilpotentCone.from_json, doc)
    if cfg.samples < 1 or cfg.grid_depth < 0:
        raise NilconeError("--samples must be >= 1 and --grid-depth >= 0")
    report = run_cone(cone, ConeRunConfig(cfg.samples, cfg.grid_depth, cfg.seed))
    out = report.to_json()
    out["command"] = cfg.command
    out["input"] = doc
    return out, EXIT_OK if report.verdict else EXIT_FALSE


def representative_document(m, s, k) -> dict:
    """Fixture file for the normal form: space, N and, when one exists, an R-split limiting flag."""
    space, N = construct_representative(m, s, k)
    doc = {"space": space.to_json(), "N": N.matrix.to_json()}
    try:
        doc["flag"] = representative_flag(m, s, k).to_json()
    except NilconeError:
        pass
    return doc


def _parse_invariants(args):
    if args.input:
        doc = load_json(args.input)
        try:
            m, s, k = doc["m"], {int(l): tuple(v) for l, v in doc.get("s", {}).items()}, doc.get("k")
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise ParseError(f"invariants file has the wrong shape: {exc!r}") from exc
    else:
        if args.m is None:
            raise ParseError("give --m (and --s, --k) or --input")
        try:
            m = [int(x) for x in args.m.split(",")]
            s = {int(l): tuple(v) for l, v in json.loads(args.s or "{}").items()}
        except (ValueError, AttributeError, TypeError) as exc:
            raise ParseError(f"cannot parse invariants: {exc}") from exc
        k = args.k
    if k is None:
        k = len(m) - 1
    try:
        return [int(x) for x in m], s, int(k)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"cannot parse invariants: {exc}") from exc


def cmd_representative(cfg: RunConfig, args):
    m, s, k = _parse_invariants(args)
    dim = sum((l + 1) * x for l, x in enumerate(m))
    v = validate_invariants(m, s, k, dim)
    if not v:
        raise NilconeError("; ".join(v.problems))
    return representative_document(m, s, k), EXIT_OK


def catalog_document(dim_max: int, parity: str) -> list:
    """JSON array of class labels, each carrying its dim, k and the signature of Q."""
    return [e.to_json() for e in catalog(dim_max, parity)]


def catalog_counts(entries) -> list[dict]:
    """Number of classes per (dim, k, signature of Q); the signature is null for skew Q."""
    counts: dict[tuple, int] = {}
    for e in entries:
        key = (e["dim"], e["k"], tuple(e["q_signature"]) if e["q_signature"] else None)
        counts[key] = counts.get(key, 0) + 1
    return [
        {"dim": d, "k": k, "q_signature": list(sig) if sig else None, "count": c}
        for (d, k, sig), c in sorted(counts.items(), key=lambda kv: (kv[0][0], kv[0][1], kv[0][2] or ()))
    ]


def cmd_catalog(cfg: RunConfig, args):
    if args.dim_max < 1:
        raise NilconeError("--dim-max must be >= 1")
    return catalog_document(args.dim_max, args.parity), EXIT_OK


COMMANDS = {
    "classify": cmd_classify,
    "weight-filtration": cmd_weight_filtration,
    "deligne": cmd_deligne,
    "verify-lmhs": cmd_verify_lmhs,
    "verify-cone": cmd_verify_cone,
    "representative": cmd_representative,
    "catalog": cmd_catalog,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="input JSON file, or a fixture name")
    common.add_argument("--output", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--samples", type=int, default=100, help="random cone samples (verify-cone)")
    common.add_argument("--grid-depth", type=int, default=4, help="simplex grid depth (verify-cone)")
    common.add_argument("--seed", type=int, default=0, help="sampling seed")

    parser = argparse.ArgumentParser(prog="nilcone", description="Nilpotent orbits, weight filtrations and cones.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "representative":
            p.add_argument("--m", help="comma-separated multiplicities m_0,...,m_k")
            p.add_argument("--s", help='signatures as JSON, e.g. {"1": [1, 0]}')
            p.add_argument("--k", type=int, help="weight (default len(m) - 1)")
        if name == "catalog":
            p.add_argument("--dim-max", type=int, default=4)
            p.add_argument("--parity", choices=("all", "even", "odd"), default="all")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    if args.seed < 0:
        print("error: --seed must be a non-negative integer", file=sys.stderr)
        return EXIT_PARSE
    cfg = RunConfig(args.command, args.input, args.output, args.samples, args.grid_depth, args.seed, args.format)
    fn = COMMANDS[args.command]
    try:
        if args.command in ("representative", "catalog"):
            obj, code = fn(cfg, args)
        else:
            obj, code = fn(cfg)
        emit(obj, cfg)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NilconeError as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC
    return code


if __name__ == "__main__":
    sys.exit(main())
