"""Hodge flags over Q(i), polarizations, Deligne splittings and limiting
mixed Hodge structures.

All vectors live in V_C with the fixed real basis of V; conjugation is
entrywise.  Failed axioms are reported as :class:`Check` records carrying
an explicit witness vector, never as exceptions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from nilcone.errors import DimensionMismatch, InvalidInvariants, NilconeError
from nilcone.linalg import (
    GAUSS,
    HermForm,
    Matrix,
    Quotient,
    Subspace,
    bilinear,
    direct_sum_check,
    is_positive_definite,
    positivity_witness,
)
from nilcone.nilpotent import FormSpace, NilpotentElement, WeightFiltration, jordan_type, primitive_part, q_ell, weight_filtration
from nilcone.orbits import _normalize_s, representative_layout
from nilcone.scalars import I, conj, encode, i_power


# --------------------------------------------------------------------------
# records


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""
    witness: list | None = None

    def __bool__(self):
        return self.passed

    def to_json(self):
        out = {"axiom": self.name, "passed": self.passed, "detail": self.detail}
        if self.witness is not None:
            out["witness"] = [[encode(x) for x in v] for v in self.witness]
        return out


def _first_failure(checks: list[Check]) -> Check | None:
    return next((c for c in checks if not c.passed), None)


@dataclass(frozen=True)
class HodgeNumbers:
    k: int
    h: tuple[tuple[tuple[int, int], int], ...]

    def __post_init__(self):
        hm = dict(self.h)
        for (p, q), x in hm.items():
            if p + q != self.k or p < 0 or q < 0 or x < 0:
                raise NilconeError(f"bad Hodge number h^{p},{q} = {x} for weight {self.k}")
            if hm.get((q, p), 0) != x:
                raise NilconeError("Hodge numbers must satisfy h^{p,q} = h^{q,p}")

    @classmethod
    def build(cls, k: int, h: dict) -> HodgeNumbers:
        return cls(k, tuple(sorted((tuple(pq), int(x)) for pq, x in h.items())))

    @property
    def dim(self) -> int:
        return sum(x for _, x in self.h)

    def __getitem__(self, pq) -> int:
        return dict(self.h).get(tuple(pq), 0)


def flag_dims(h: HodgeNumbers) -> tuple[int, ...]:
    """(f^0, f^1, ..., f^k) with f^p = sum_(r >= p) h^(r, k-r)."""
    return tuple(sum(h[(r, h.k - r)] for r in range(p, h.k + 1)) for p in range(h.k + 1))


class HodgeFlag:
    """Decreasing filtration F^0 = V_C ⊇ F^1 ⊇ ... ⊇ F^k ⊇ F^(k+1) = 0."""

    def __init__(self, k: int, steps: dict[int, Subspace], ambient: int, declared_f=None):
        self.k = k
        self.ambient = ambient
        full = Subspace.full(ambient, GAUSS)
        spaces = {}
        for p in range(0, k + 1):
            if p in steps:
                S = steps[p]
                if S.ambient != ambient:
                    raise DimensionMismatch("flag step in the wrong ambient dimension")
                spaces[p] = S if S.field == GAUSS else S.complexify()
            elif p == 0:
                spaces[p] = full
            else:
                raise NilconeError(f"flag step F^{p} is missing")
        if spaces[0] != full:
            raise NilconeError("F^0 must be all of V_C")
        for p in range(1, k + 1):
            if not spaces[p - 1].contains_space(spaces[p]):
                raise NilconeError(f"F^{p} is not contained in F^{p - 1}")
        self._spaces = spaces
        self.declared_f = tuple(declared_f) if declared_f is not None else None

    def __getitem__(self, p: int) -> Subspace:
        if p <= 0:
            return self._spaces[0]
        if p > self.k:
            return Subspace.zero(self.ambient, GAUSS)
        return self._spaces[p]

    def __eq__(self, other):
        if not isinstance(other, HodgeFlag):
            return NotImplemented
        return self.k == other.k and all(self[p] == other[p] for p in range(self.k + 1))

    def __repr__(self):
        return f"HodgeFlag(k={self.k}, f={self.dims()})"

    def dims(self) -> tuple[int, ...]:
        return tuple(self[p].dim for p in range(self.k + 1))

    def conj(self, p: int) -> Subspace:
        return self[p].conj()

    def apply(self, g: Matrix) -> HodgeFlag:
        """g F, for an invertible g."""
        return HodgeFlag(self.k, {p: self[p].map(g) for p in range(1, self.k + 1)}, self.ambient)

    @classmethod
    def from_vectors(cls, k: int, steps: dict[int, list], ambient: int) -> HodgeFlag:
        return cls(k, {p: Subspace.span(v, ambient, GAUSS) for p, v in steps.items()}, ambient)

    def to_json(self):
        return {
            "f": list(self.dims()),
            "steps": {str(p): [[encode(x) for x in r] for r in self[p].basis] for p in range(1, self.k + 1)},
        }

    @classmethod
    def from_json(cls, obj, ambient: int) -> HodgeFlag:
        f = obj.get("f")
        if f is None:
            raise NilconeError("flag needs its dimension vector f")
        k = len(f) - 1
        steps = {int(p): Subspace.span(rows, ambient, GAUSS) for p, rows in obj["steps"].items()}
        return cls(k, steps, ambient, declared_f=f)


# --------------------------------------------------------------------------
# pure Hodge structures


def in_compact_dual(F: HodgeFlag, space: FormSpace, f=None) -> Check:
    """Dimension vector and isotropy Q(F^p, F^(k+1-p)) = 0."""
    if F.ambient != space.dim:
        return Check("compact_dual", False, f"flag lives in dimension {F.ambient}, V has {space.dim}")
    if F.k != space.k:
        return Check("compact_dual", False, f"flag has weight {F.k}, Q has weight {space.k}")
    want = f if f is not None else F.declared_f
    if want is not None and tuple(want) != F.dims():
        return Check("compact_dual", False, f"dims {F.dims()} differ from f = {tuple(want)}")
    G = space.gram
    for p in range(1, F.k + 1):
        for u in F[p].basis:
            for v in F[F.k + 1 - p].basis:
                if bilinear(u, G, v):
                    return Check("compact_dual", False, f"Q(F^{p}, F^{F.k + 1 - p}) != 0", [u, v])
    return Check("compact_dual", True, "isotropic with the declared dimensions")


@dataclass
class HodgeDecomposition:
    k: int
    spaces: dict[tuple[int, int], Subspace]
    checks: list[Check] = field(default_factory=list)

    @property
    def is_hodge(self) -> bool:
        return all(self.checks)

    def numbers(self) -> dict[tuple[int, int], int]:
        return {pq: S.dim for pq, S in self.spaces.items()}


def _hodge_pieces(F_of, conjF_of, m: int, ambient: int) -> tuple[dict, list[Check]]:
    """V^{p,q} = F^p ∩ conj F^q for p + q = m, plus the direct-sum check."""
    spaces = {}
    for p in range(0, m + 1):
        spaces[(p, m - p)] = F_of(p) & conjF_of(m - p)
    indep, total = direct_sum_check(list(spaces.values()), ambient)
    checks = []
    if indep and total.dim == ambient:
        checks.append(Check("hodge_structure", True, f"weight {m} decomposition"))
    else:
        witness = None
        for (p, q), S in spaces.items():
            if S.dim and not indep:
                witness = [S.basis[0]]
                break
        checks.append(
            Check(
                "hodge_structure",
                False,
                f"pieces span {total.dim} of {ambient} dimensions (independent: {indep})",
                witness,
            )
        )
    return spaces, checks


def hodge_decomposition(F: HodgeFlag) -> HodgeDecomposition:
    spaces, checks = _hodge_pieces(lambda p: F[p], F.conj, F.k, F.ambient)
    for (p, q), S in spaces.items():
        if S.conj() != spaces[(q, p)]:
            checks.append(Check("conjugation", False, f"conj V^{p},{q} != V^{q},{p}", list(S.basis[:1])))
    if all(checks):
        for p in range(F.k + 1):
            parts = [spaces[(r, F.k - r)] for r in range(p, F.k + 1)]
            _, tot = direct_sum_check(parts, F.ambient)
            if tot != F[p]:
                checks.append(Check("reconstruction", False, f"F^{p} is not the sum of V^(r,.) for r >= {p}"))
    return HodgeDecomposition(F.k, spaces, checks)


def _polarization_checks(spaces: dict, gram: Matrix, where: str, lift=None) -> list[Check]:
    """Q(V^{p,q}, V^{r,s}) = 0 unless (p,q) = (s,r); i^(p-q) Q(v, conj v) > 0."""
    lift = lift or (lambda v: v)
    checks = []
    items = [(pq, S) for pq, S in spaces.items() if S.dim]
    ortho_ok = True
    for (p, q), S in items:
        for (r, s), T in items:
            if (p, q) == (s, r):
                continue
            for u in S.basis:
                for v in T.basis:
                    if bilinear(u, gram, v):
                        checks.append(
                            Check(
                                "orthogonality",
                                False,
                                f"{where}: Q(V^{p},{q}, V^{r},{s}) != 0",
                                [lift(u), lift(v)],
                            )
                        )
                        ortho_ok = False
                        break
                if not ortho_ok:
                    break
            if not ortho_ok:
                break
        if not ortho_ok:
            break
    if ortho_ok:
        checks.append(Check("orthogonality", True, where))
    pos_ok = True
    for (p, q), S in items:
        c = i_power(p - q)
        B = S.basis
        H = Matrix([[c * bilinear(u, gram, [conj(x) for x in v]) for v in B] for u in B])
        h = HermForm(H)
        if not is_positive_definite(h):
            coeffs = positivity_witness(h)
            vec = [sum((a * u[j] for a, u in zip(coeffs, B)), 0 * I) for j in range(len(B[0]))]
            value = h(coeffs, coeffs)
            checks.append(
                Check(
                    "positivity",
                    False,
                    f"{where}: i^{p - q} Q(v, conj v) = {value} <= 0 on V^{p},{q}",
                    [lift(vec)],
                )
            )
            pos_ok = False
            break
    if pos_ok:
        checks.append(Check("positivity", True, where))
    return checks


def is_polarized(F: HodgeFlag, space: FormSpace) -> list[Check]:
    """Both polarization axioms for the pure Hodge structure defined by F."""
    dec = hodge_decomposition(F)
    if not dec.is_hodge:
        return dec.checks
    return dec.checks + _polarization_checks(dec.spaces, space.gram, f"weight {F.k}")


def polarized(F: HodgeFlag, space: FormSpace) -> bool:
    return all(is_polarized(F, space))


def in_period_domain(F: HodgeFlag, space: FormSpace) -> bool:
    return bool(in_compact_dual(F, space)) and polarized(F, space)


def orbit_point(F: HodgeFlag, N: NilpotentElement, z) -> HodgeFlag:
    """exp(z N) F for a Gaussian rational z."""
    from nilcone.sampling import exp_nilpotent

    return F.apply(exp_nilpotent(N.matrix, z))


# --------------------------------------------------------------------------
# Deligne splitting


@dataclass
class DeligneSplitting:
    k: int
    spaces: dict[tuple[int, int], Subspace]
    checks: list[Check] = field(default_factory=list)
    primitive: dict[tuple[int, int], Subspace] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks)

    def real_split(self) -> bool:
        return all(S.conj() == self.spaces.get((q, p)) for (p, q), S in self.spaces.items())

    def numbers(self) -> dict[tuple[int, int], int]:
        return {pq: S.dim for pq, S in self.spaces.items() if S.dim}

    def __getitem__(self, pq) -> Subspace:
        p, q = pq
        if (p, q) in self.spaces:
            return self.spaces[(p, q)]
        return Subspace.zero(self._ambient, GAUSS)

    def to_json(self):
        return {
            "I": {f"{p},{q}": [[encode(x) for x in r] for r in S.basis] for (p, q), S in sorted(self.spaces.items()) if S.dim},
            "checks": [c.to_json() for c in self.checks],
        }


def deligne_splitting(F: HodgeFlag, W: WeightFiltration, N: Matrix | NilpotentElement | None = None) -> DeligneSplitting:
    """I^{p,q} = F^p ∩ W_(p+q) ∩ (conj F^q ∩ W_(p+q) + sum_(j>=1) conj F^(q-j) ∩ W_(p+q-j-1)),
    with W read at the literal index p + q."""
    n = F.ambient
    k = F.k

    def Wc(i):
        return W[i].complexify()

    spaces = {}
    for p in range(0, k + 1):
        for q in range(0, k + 1):
            w = Wc(p + q)
            inner = F.conj(q) & w
            j = 1
            while p + q - j - 1 >= 0:
                inner = inner + (F.conj(q - j) & Wc(p + q - j - 1))
                j += 1
            spaces[(p, q)] = F[p] & w & inner
    out = DeligneSplitting(k, spaces)
    out._ambient = n
    checks = out.checks

    indep, total = direct_sum_check(list(spaces.values()), n)
    checks.append(
        Check("direct_sum", indep and total.dim == n, f"sum of I^(p,q) has dim {total.dim} of {n}, independent: {indep}")
    )
    ok = True
    for p in range(0, k + 1):
        parts = [S for (r, _), S in spaces.items() if r >= p]
        ind, tot = direct_sum_check(parts, n)
        if not ind or tot != F[p]:
            ok = False
            checks.append(Check("F_reconstruction", False, f"F^{p} != sum of I^(r,.) with r >= {p}", list(F[p].basis[:1])))
            break
    if ok:
        checks.append(Check("F_reconstruction", True, "F^p = sum_(r>=p) I^(r,.)"))
    ok = True
    for ell in range(0, 2 * k + 1):
        parts = [S for (p, q), S in spaces.items() if p + q <= ell]
        ind, tot = direct_sum_check(parts, n)
        if not ind or tot != Wc(ell):
            ok = False
            checks.append(Check("W_reconstruction", False, f"W_{ell} != sum of I^(p,q) with p + q <= {ell}"))
            break
    if ok:
        checks.append(Check("W_reconstruction", True, "W_l = sum_(p+q<=l) I^(p,q)"))
    ok = True
    for (p, q), S in spaces.items():
        target = spaces.get((q, p), Subspace.zero(n, GAUSS))
        for (r, s), T in spaces.items():
            if r < q and s < p:
                target = target + T
        cS = S.conj()
        if not target.contains_space(cS):
            ok = False
            checks.append(
                Check("conjugation", False, f"conj I^{p},{q} is not I^{q},{p} modulo lower terms", list(cS.basis[:1]))
            )
            break
    if ok:
        checks.append(Check("conjugation", True, "conj I^(p,q) = I^(q,p) mod sum_(r<q,s<p) I^(r,s)"))
    if N is not None:
        Nm = N.matrix if isinstance(N, NilpotentElement) else N
        ok = True
        for (p, q), S in spaces.items():
            target = spaces.get((p - 1, q - 1), Subspace.zero(n, GAUSS))
            img = S.map(Nm)
            if not target.contains_space(img):
                ok = False
                checks.append(Check("N_degree", False, f"N I^{p},{q} is not in I^{p - 1},{q - 1}", list(img.basis[:1])))
                break
        if ok:
            checks.append(Check("N_degree", True, "N I^(p,q) ⊆ I^(p-1,q-1)"))
    return out


def primitive_splitting(splitting: DeligneSplitting, N: NilpotentElement) -> dict[tuple[int, int], Subspace]:
    """I^{p,q}_prim = ker N^(l+1) restricted to I^{p,q}, for p + q = k + l, l >= 0."""
    k = splitting.k
    out = {}
    for (p, q), S in splitting.spaces.items():
        ell = p + q - k
        if ell < 0:
            continue
        ker = Subspace.span(_kernel_vectors(N.power(ell + 1)), N.dim, GAUSS)
        out[(p, q)] = S & ker
    splitting.primitive = out
    return out


def _kernel_vectors(M: Matrix):
    from nilcone.linalg import kernel

    return kernel(M).basis


# --------------------------------------------------------------------------
# limiting mixed Hodge structures


@dataclass
class LMHSRecord:
    flag: HodgeFlag
    N: NilpotentElement
    W: WeightFiltration | None
    splitting: DeligneSplitting | None
    checks: list[Check]

    @property
    def verdict(self) -> bool:
        return all(self.checks)

    def failed(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def to_json(self):
        out = {"verdict": self.verdict, "axioms": [c.to_json() for c in self.checks]}
        if self.W is not None:
            out["W_dims"] = self.W.dims()
        if self.splitting is not None:
            out["deligne"] = self.splitting.to_json()
        return out


def graded_hodge(F: HodgeFlag, wf: WeightFiltration, m: int) -> tuple[Quotient, dict, list[Check]]:
    """Induced filtration (F^p ∩ W_m + W_(m-1)) / W_(m-1) on Gr_m and its
    (p, m-p) pieces, in the quotient's coordinates."""
    g = wf.gr(m)
    Wm = wf[m].complexify()

    def Fm(p):
        return Subspace.span([g.coords(v) for v in (F[p] & Wm).basis], g.dim, GAUSS)

    cache = {}

    def Fm_cached(p):
        p = max(min(p, F.k + 1), 0)
        if p not in cache:
            cache[p] = Fm(p)
        return cache[p]

    spaces, checks = _hodge_pieces(Fm_cached, lambda q: Fm_cached(q).conj(), m, g.dim)
    for c in checks:
        c.detail = f"Gr_{m}: {c.detail}"
        if c.witness:
            c.witness = [g.lift(v) for v in c.witness]
    return g, spaces, checks


def is_lmhs(F: HodgeFlag, N: NilpotentElement) -> LMHSRecord:
    """Check (F, N) against the axioms of a limiting mixed Hodge structure, in order:
    compact dual, N F^p ⊆ F^(p-1), weight-m Hodge structures on every Gr_m,
    and polarization of the primitive parts by Q_l."""
    space = N.space
    checks = [in_compact_dual(F, space)]
    if not checks[0]:
        return LMHSRecord(F, N, None, None, checks)
    hor = Check("horizontality", True, "N F^p ⊆ F^(p-1)")
    for p in range(1, F.k + 1):
        img = F[p].map(N.matrix)
        if not F[p - 1].contains_space(img):
            bad = next(v for v in F[p].basis if not F[p - 1].contains(N.matrix @ v))
            hor = Check("horizontality", False, f"N F^{p} is not in F^{p - 1}", [bad])
            break
    checks.append(hor)
    try:
        wf = weight_filtration(N)
    except NilconeError as exc:
        checks.append(Check("weight_filtration", False, str(exc)))
        return LMHSRecord(F, N, None, None, checks)

    graded = {}
    hs_checks = []
    for m in range(0, 2 * F.k + 1):
        g, spaces, cs = graded_hodge(F, wf, m)
        graded[m] = (g, spaces)
        hs_checks += cs
    bad = _first_failure(hs_checks)
    checks.append(bad if bad is not None else Check("hodge_structure", True, "F induces a weight-m Hodge structure on every Gr_m"))

    if bad is None:
        orth, pos = [], []
        for ell in range(0, F.k + 1):
            g, spaces = graded[F.k + ell]
            if g.dim == 0:
                continue
            prim = primitive_part(wf, ell).complexify()
            pieces = {pq: S & prim for pq, S in spaces.items()}
            indep, total = direct_sum_check(list(pieces.values()), g.dim)
            if total != prim:
                checks.append(Check("primitive_hodge", False, f"primitive part of Gr_{F.k + ell} is not a sub-Hodge structure"))
                continue
            G = q_ell(N, ell, wf).gram
            for c in _polarization_checks(pieces, G, f"Gr_{F.k + ell} prim (Q_{ell})", g.lift):
                (orth if c.name == "orthogonality" else pos).append(c)
        for name, cs in (("orthogonality", orth), ("positivity", pos)):
            bad = _first_failure(cs)
            checks.append(bad if bad is not None else Check(name, True, f"{name} of Q_l on every primitive part"))
    splitting = deligne_splitting(F, wf, N.matrix)
    return LMHSRecord(F, N, wf, splitting, checks)


# --------------------------------------------------------------------------
# fixtures from normal forms


def representative_flag(m, s, k: int) -> HodgeFlag:
    """An R-split limiting Hodge flag for the normal-form representative of (m, s).

    Positive diagonal strings are Hodge-Tate (top at (P, P), 2P = k + l);
    negative ones are paired into v1 + i v2 at (P+1, P-1); symplectic pairs
    give v + i w at (P+1, P) with 2P + 1 = k + l.  Conjugates fill the
    mirrored slots and N^a moves a top down by (a, a).
    """
    m = tuple(m)
    s = _normalize_s(s)
    dim = sum((l + 1) * x for l, x in enumerate(m))
    layout = representative_layout(m, s, k)
    placed: list[tuple[int, int, list]] = []  # (p, q, vector)

    def unit(i, coeff=1):
        v = [0 * I] * dim
        v[i] = v[i] + coeff
        return v

    def place(p, q, ell, starts_coeffs):
        for a in range(ell + 1):
            v = [0 * I] * dim
            for start, c in starts_coeffs:
                v[start + a] = v[start + a] + c
            placed.append((p - a, q - a, v))

    negatives: dict[int, list[int]] = {}
    for st in layout:
        ell = st.ell
        if st.kind[0] == "diag":
            P = (k + ell) // 2
            if st.kind[1] == 1:
                place(P, P, ell, [(st.start, 1)])
            else:
                negatives.setdefault(ell, []).append(st.start)
        elif st.kind[2] == 0:
            v, w = st.start, st.kind[1]
            P = (k + ell - 1) // 2
            place(P + 1, P, ell, [(v, 1), (w, I)])
            place(P, P + 1, ell, [(v, 1), (w, -I)])
    for ell, starts in negatives.items():
        P = (k + ell) // 2
        if len(starts) % 2 or P - 1 < ell:
            raise InvalidInvariants(
                f"no R-split limiting Hodge flag of this shape: Q_{ell} has {len(starts)} negative directions"
            )
        for v, w in zip(starts[::2], starts[1::2]):
            place(P + 1, P - 1, ell, [(v, 1), (w, I)])
            place(P - 1, P + 1, ell, [(v, 1), (w, -I)])
    steps = {p: [v for (pp, _, v) in placed if pp >= p] for p in range(1, k + 1)}
    return HodgeFlag.from_vectors(k, steps, dim)
