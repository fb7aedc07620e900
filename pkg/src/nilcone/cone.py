"""Nilpotent cones: validation, sampling, and the two constancy checks
(common weight filtration, common (m, s) invariants) over sampled points.

Sampling is finite and exact: every sample is sum t_i N_i with explicit
positive rationals t_i, and the sample set is echoed in the report.
"""

from __future__ import annotations

import itertools
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from nilcone.errors import DimensionMismatch, NilconeError
from nilcone.hodge import Check, HodgeFlag, is_lmhs, representative_flag
from nilcone.linalg import Matrix, rank
from nilcone.nilpotent import FormSpace, NilpotentElement, invariants, weight_filtration
from nilcone.orbits import classify_real, construct_representative
from nilcone.sampling import random_group_element
from nilcone.scalars import encode

SCHEMA_VERSION = 1
STRATEGIES = ("grid", "random", "vertices")
SPLIT_NOTE = (
    "split class: equal (m, s) on the open connected cone places it in a single "
    "identity-component orbit; which of the two components is not computed"
)


@dataclass
class NilpotentCone:
    space: FormSpace
    generators: list[NilpotentElement]
    flag: HodgeFlag | None = None
    name: str = ""

    def __post_init__(self):
        if not self.generators:
            raise NilconeError("a cone needs at least one generator")
        for Ni in self.generators:
            if Ni.space != self.space:
                raise DimensionMismatch("generators must live on the cone's space")
        if self.flag is not None and self.flag.ambient != self.space.dim:
            raise DimensionMismatch("flag lives in the wrong dimension")

    @property
    def m(self) -> int:
        return len(self.generators)

    def point(self, t) -> NilpotentElement:
        if len(t) != self.m:
            raise DimensionMismatch(f"{len(t)} coefficients for {self.m} generators")
        M = Matrix.zeros(self.space.dim, self.space.dim)
        for ti, Ni in zip(t, self.generators):
            M = M + Ni.matrix.scale(Fraction(ti))
        return NilpotentElement(self.space, M)

    def barycenter(self) -> NilpotentElement:
        return self.point([1] * self.m)

    def to_json(self):
        out = {"space": self.space.to_json(), "generators": [N.matrix.to_json() for N in self.generators]}
        if self.flag is not None:
            out["flag"] = self.flag.to_json()
        if self.name:
            out["name"] = self.name
        return out

    @classmethod
    def from_json(cls, obj) -> NilpotentCone:
        space = FormSpace.from_json(obj["space"])
        gens = [NilpotentElement(space, Matrix.from_json(g)) for g in obj["generators"]]
        flag = HodgeFlag.from_json(obj["flag"], space.dim) if obj.get("flag") is not None else None
        return cls(space, gens, flag, obj.get("name", ""))


# --------------------------------------------------------------------------
# validation


@dataclass
class ConeDiagnostics:
    checks: list[Check]
    info: list[Check] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return all(self.checks)

    def to_json(self):
        return {
            "valid": self.valid,
            "checks": [c.to_json() for c in self.checks],
            "info": [c.to_json() for c in self.info],
        }


def validate_cone(cone: NilpotentCone, interior=None) -> ConeDiagnostics:
    """Commutation, horizontality, and the LMHS axioms along interior rays.

    The barycenter and each near-vertex point of ``interior`` (default:
    ``vertex_points``) must give a limiting mixed Hodge structure with F.
    Generators themselves are boundary rays of the open cone; their LMHS
    status is reported under ``info`` and does not affect validity.  This
    is a partial certificate of the several-variable orbit property.
    """
    checks, info = [], []
    gens = cone.generators
    for i, j in itertools.combinations(range(cone.m), 2):
        C = gens[i].matrix.commutator(gens[j].matrix)
        if not C.is_zero():
            r, c = next((r, c) for r in range(C.nrows) for c in range(C.ncols) if C.rows[r][c])
            checks.append(
                Check("commutation", False, f"[N_{i + 1}, N_{j + 1}] has entry ({r}, {c}) = {C.rows[r][c]}")
            )
    if not any(c.name == "commutation" for c in checks):
        checks.append(Check("commutation", True, "generators commute"))
    F = cone.flag
    if F is None:
        return ConeDiagnostics(checks, info)
    hor = Check("horizontality", True, "N_i F^p ⊆ F^(p-1)")
    for i, Ni in enumerate(gens):
        for p in range(1, F.k + 1):
            bad = next((v for v in F[p].basis if not F[p - 1].contains(Ni.matrix @ v)), None)
            if bad is not None:
                hor = Check("horizontality", False, f"N_{i + 1} F^{p} is not in F^{p - 1}", [bad])
                break
        if not hor:
            break
    checks.append(hor)
    points = interior if interior is not None else vertex_points(cone.m)
    for t in points:
        rec = is_lmhs(F, cone.point(t))
        label = "(" + ",".join(str(x) for x in t) + ")"
        bad = next((c for c in rec.checks if not c.passed), None)
        if bad is None:
            checks.append(Check("lmhs", True, f"(F, N) is a limiting MHS at t = {label}"))
        else:
            checks.append(Check("lmhs", False, f"t = {label}: {bad.name}: {bad.detail}", bad.witness))
    for i, Ni in enumerate(gens):
        rec = is_lmhs(F, Ni)
        info.append(Check("generator_lmhs", rec.verdict, f"N_{i + 1}: " + (", ".join(rec.failed()) or "limiting MHS")))
    return ConeDiagnostics(checks, info)


# --------------------------------------------------------------------------
# sampling


def grid_points(m: int, depth: int) -> list[tuple[int, ...]]:
    """Positive integer vectors with coordinate sum <= m + depth - 1."""
    out = []
    total = m + depth - 1
    for t in itertools.product(range(1, depth + 1), repeat=m):
        if sum(t) <= total:
            out.append(tuple(Fraction(x) for x in t))
    out.sort(key=lambda t: (sum(t), tuple(-x for x in t)))
    return out


def vertex_points(m: int, weight=Fraction(1, 100)) -> list[tuple[Fraction, ...]]:
    """Barycenter plus one point near each vertex ray (1 at i, ``weight`` elsewhere)."""
    pts = [tuple(Fraction(1) for _ in range(m))]
    if m > 1:
        for i in range(m):
            pts.append(tuple(Fraction(1) if j == i else Fraction(weight) for j in range(m)))
    return pts


def sample_cone(cone: NilpotentCone, count: int, strategy: str = "random", seed: int = 0, bound: int = 9):
    """Coefficient vectors of sample points; ``count`` is the depth for ``grid``.

    ``random`` always starts with the ``vertices`` anchors and then adds
    distinct seeded points with numerators and denominators in [1, bound];
    the bound doubles whenever 64 draws in a row repeat earlier points.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")
    m = cone.m
    if strategy == "grid":
        return grid_points(m, count)
    anchors = vertex_points(m)
    if strategy == "vertices" or count <= len(anchors):
        return anchors[:count]
    rng = random.Random(seed)
    pts = list(anchors)
    seen = set(pts)
    misses = 0
    while len(pts) < count:
        t = tuple(Fraction(rng.randint(1, bound), rng.randint(1, bound)) for _ in range(m))
        if t in seen:
            misses += 1
            if misses == 64:
                bound, misses = 2 * bound, 0
            continue
        seen.add(t)
        pts.append(t)
        misses = 0
    return pts


# --------------------------------------------------------------------------
# constancy checks


def _fmt(t) -> list[str]:
    return [encode(Fraction(x)) for x in t]


@dataclass
class CKResult:
    equal: bool
    W_dims: list[int] | None = None
    witness: dict | None = None

    def __bool__(self):
        return self.equal

    def to_json(self):
        return {"equal": self.equal, "W_dims": self.W_dims, "witness": self.witness}


def _sample_data(args):
    cone_json, t = args
    cone = NilpotentCone.from_json(cone_json)
    N = cone.point(t)
    wf = weight_filtration(N)
    return wf, invariants(N, wf)


def _evaluate(cone: NilpotentCone, samples, workers: int = 1):
    if workers > 1 and len(samples) > 1:
        payload = cone.to_json()
        with ProcessPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(_sample_data, [(payload, t) for t in samples]))
    out = []
    for t in samples:
        N = cone.point(t)
        wf = weight_filtration(N)
        out.append((wf, invariants(N, wf)))
    return out


def verify_ck(cone: NilpotentCone, samples, workers: int = 1, _data=None) -> CKResult:
    """True iff every sample has the same weight filtration, as canonical subspaces."""
    data = _data if _data is not None else _evaluate(cone, samples, workers)
    W0 = data[0][0]
    for t, (wf, _) in zip(samples[1:], data[1:]):
        lvl = W0.first_mismatch(wf)
        if lvl is not None:
            return CKResult(
                False,
                witness={
                    "t": _fmt(samples[0]),
                    "t_prime": _fmt(t),
                    "level": lvl,
                    "dims": [W0[lvl].dim, wf[lvl].dim],
                },
            )
    return CKResult(True, W_dims=W0.dims())


@dataclass
class CongruenceReport:
    samples: list
    invariants: list
    ck: CKResult
    label: dict | None
    verdict: bool
    split_note: str = ""
    witness: dict | None = None
    config: dict = field(default_factory=dict)
    diagnostics: dict | None = None

    def __bool__(self):
        return self.verdict

    def to_json(self):
        return {
            "schema_version": SCHEMA_VERSION,
            "config": self.config,
            "diagnostics": self.diagnostics,
            "samples": [{"t": _fmt(t), "invariants": inv.to_json()} for t, inv in zip(self.samples, self.invariants)],
            "weight_filtration": self.ck.to_json(),
            "label": self.label,
            "split_note": self.split_note,
            "witness": self.witness,
            "verdict": self.verdict,
        }


def verify_theorem1(cone: NilpotentCone, samples, workers: int = 1, config=None) -> CongruenceReport:
    """Equal (m, s) across all samples; attaches the real class label."""
    data = _evaluate(cone, samples, workers)
    invs = [inv for _, inv in data]
    ck = verify_ck(cone, samples, _data=data)
    witness = None
    for t, inv in zip(samples[1:], invs[1:]):
        if inv != invs[0]:
            witness = {
                "t": _fmt(samples[0]),
                "t_prime": _fmt(t),
                "invariants": invs[0].to_json(),
                "invariants_prime": inv.to_json(),
            }
            break
    verdict = witness is None
    label, note = None, ""
    if verdict:
        lab = classify_real(invs[0].m, invs[0].s_map, cone.space.k)
        label = lab.to_json()
        if lab.split:
            note = SPLIT_NOTE
    return CongruenceReport(list(samples), invs, ck, label, verdict, note, witness, dict(config or {}))


@dataclass
class ConeRunConfig:
    samples: int = 100
    grid_depth: int = 4
    seed: int = 0
    workers: int = 1

    def points(self, cone: NilpotentCone):
        pts = list(grid_points(cone.m, self.grid_depth)) if self.grid_depth > 0 else []
        seen = set(pts)
        for t in sample_cone(cone, max(self.samples, 1), "random", self.seed):
            if t not in seen:
                seen.add(t)
                pts.append(t)
        return pts


def run_cone(cone: NilpotentCone, config: ConeRunConfig | None = None) -> CongruenceReport:
    config = config or ConeRunConfig()
    diag = validate_cone(cone)
    pts = config.points(cone)
    echo = asdict(config)
    echo.pop("workers")
    report = verify_theorem1(cone, pts, config.workers, echo)
    report.diagnostics = diag.to_json()
    return report


# --------------------------------------------------------------------------
# fixtures


def block_diag(A: Matrix, B: Matrix) -> Matrix:
    n, m = A.nrows, B.nrows
    rows = [list(r) + [0] * m for r in A.rows] + [[0] * n + list(r) for r in B.rows]
    return Matrix(rows)


def direct_sum_space(A: FormSpace, B: FormSpace) -> FormSpace:
    if A.k != B.k:
        raise NilconeError("direct sums need equal weights")
    return FormSpace.from_gram(block_diag(A.gram, B.gram), A.k)


def direct_sum_flag(F: HodgeFlag, G: HodgeFlag) -> HodgeFlag:
    n, m = F.ambient, G.ambient
    steps = {}
    for p in range(1, F.k + 1):
        vecs = [list(v) + [0] * m for v in F[p].basis] + [[0] * n + list(v) for v in G[p].basis]
        steps[p] = vecs
    return HodgeFlag.from_vectors(F.k, steps, n + m)


@dataclass(frozen=True)
class Piece:
    """A normal-form representative with its R-split limiting flag."""

    m: tuple
    s: dict
    k: int

    def build(self):
        space, N = construct_representative(self.m, self.s, self.k)
        return space, N, representative_flag(self.m, self.s, self.k)


def single_cone(piece: Piece, name: str = "") -> NilpotentCone:
    space, N, F = piece.build()
    return NilpotentCone(space, [N], F, name)


def sum_cone(a: Piece, b: Piece, mode: str = "independent", name: str = "") -> NilpotentCone:
    """Generators on V_A ⊕ V_B.

    independent: N_A ⊕ 0 and 0 ⊕ N_B.  nested: N_A ⊕ N_B and N_A ⊕ 0.
    scaled: N_A ⊕ N_B and N_A ⊕ 2 N_B.  adversarial: N_A ⊕ 0 and
    -N_A ⊕ N_B, which commute but are not a cone of one orbit type.
    """
    sa, Na, Fa = a.build()
    sb, Nb, Fb = b.build()
    space = direct_sum_space(sa, sb)
    F = direct_sum_flag(Fa, Fb)
    Za = Matrix.zeros(sa.dim, sa.dim)
    Zb = Matrix.zeros(sb.dim, sb.dim)
    pairs = {
        "independent": [(Na.matrix, Zb), (Za, Nb.matrix)],
        "nested": [(Na.matrix, Nb.matrix), (Na.matrix, Zb)],
        "scaled": [(Na.matrix, Nb.matrix), (Na.matrix, Nb.matrix.scale(2))],
        "adversarial": [(Na.matrix, Zb), (-Na.matrix, Nb.matrix)],
    }[mode]
    gens = [NilpotentElement(space, block_diag(x, y)) for x, y in pairs]
    return NilpotentCone(space, gens, F, name or f"{mode}")


def multi_cone(pieces, name: str = "") -> NilpotentCone:
    """One generator per block of V_1 ⊕ ... ⊕ V_r, each acting on its own block."""
    built = [p.build() for p in pieces]
    space, F = built[0][0], built[0][2]
    for sp, _, G in built[1:]:
        space = direct_sum_space(space, sp)
        F = direct_sum_flag(F, G)
    gens, offset = [], 0
    for sp, N, _ in built:
        rows = [[0] * space.dim for _ in range(space.dim)]
        for i, r in enumerate(N.matrix.rows):
            for j, x in enumerate(r):
                rows[offset + i][offset + j] = x
        gens.append(NilpotentElement(space, Matrix(rows)))
        offset += sp.dim
    return NilpotentCone(space, gens, F, name or "blocks")


def conjugate_cone(cone: NilpotentCone, seed: int, name: str = "") -> NilpotentCone:
    """Move the whole cone by a random exact element of G_R."""
    g = random_group_element(cone.space, random.Random(seed))
    gens = [N.conjugated(g) for N in cone.generators]
    F = cone.flag.apply(g) if cone.flag is not None else None
    return NilpotentCone(cone.space, gens, F, name or f"{cone.name}@g{seed}")


ELLIPTIC = Piece((0, 1), {1: (1, 0)}, 1)
WEIGHT1_N0 = Piece((2, 0), {1: (0, 0)}, 1)
WEIGHT2_STRING = Piece((0, 0, 1), {0: (0, 0), 2: (1, 0)}, 2)
WEIGHT2_PAIR = Piece((0, 2, 0), {0: (0, 0), 2: (0, 0)}, 2)
WEIGHT3_LONG = Piece((0, 0, 0, 1), {1: (0, 0), 3: (1, 0)}, 3)
WEIGHT3_SHORT = Piece((0, 1, 0, 0), {1: (1, 0), 3: (0, 0)}, 3)
WEIGHT4_LONG = Piece((0, 0, 0, 0, 1), {0: (0, 0), 2: (0, 0), 4: (1, 0)}, 4)
WEIGHT4_SHORT = Piece((0, 0, 1, 0, 0), {0: (0, 0), 2: (1, 0), 4: (0, 0)}, 4)


def fixture_cones() -> list[NilpotentCone]:
    """Cones that pass validate_cone; several have two independent generators."""
    base = [
        single_cone(ELLIPTIC, "elliptic"),
        sum_cone(ELLIPTIC, ELLIPTIC, "independent", "elliptic+elliptic"),
        sum_cone(ELLIPTIC, ELLIPTIC, "nested", "elliptic+elliptic nested"),
        sum_cone(WEIGHT2_STRING, WEIGHT2_PAIR, "scaled", "weight2 scaled"),
        sum_cone(WEIGHT2_STRING, WEIGHT2_PAIR, "independent", "weight2 string+pair"),
        sum_cone(WEIGHT3_LONG, WEIGHT3_SHORT, "independent", "weight3 long+short"),
        sum_cone(WEIGHT3_LONG, WEIGHT3_SHORT, "nested", "weight3 nested"),
        sum_cone(WEIGHT4_LONG, WEIGHT4_SHORT, "independent", "weight4 long+short"),
        multi_cone([ELLIPTIC, ELLIPTIC, ELLIPTIC], "three elliptic blocks"),
    ]
    moved = [conjugate_cone(base[1], 1), conjugate_cone(base[5], 2), conjugate_cone(base[8], 3)]
    return base + moved


def adversarial_cones() -> list[NilpotentCone]:
    return [
        sum_cone(ELLIPTIC, ELLIPTIC, "adversarial", "elliptic adversarial"),
        sum_cone(WEIGHT3_LONG, WEIGHT3_SHORT, "adversarial", "weight3 adversarial"),
    ]


def independent_generators(cone: NilpotentCone) -> bool:
    """Linear independence of the generators as vectors in g."""
    vecs = [[x for r in N.matrix.rows for x in r] for N in cone.generators]
    return rank(Matrix(vecs)) == cone.m
