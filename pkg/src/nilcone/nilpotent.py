"""Structure of a nilpotent N in End(V, Q).

Jordan multiplicities, a standard triple inside End(V, Q), the weight
filtration W(N) centered at the weight k of Q, its graded pieces, the forms
Q_l(u, v) = Q(u, N^l v) and the complete invariant pair (m, s).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from nilcone.errors import DimensionMismatch, IllDefined, NilconeError, NotInAlgebra, NotNilpotent
from nilcone.linalg import (
    Filtration,
    Matrix,
    Quotient,
    Subspace,
    SymForm,
    bilinear,
    congruence_diagonalize,
    image,
    inverse,
    kernel,
    rank,
    signature,
    symplectic_basis,
)


@dataclass(frozen=True)
class FormSpace:
    """(V, Q, k): Q nondegenerate and (-1)^k-symmetric."""

    Q: SymForm
    k: int

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("weight k must be non-negative")
        if self.Q.sign != (-1) ** self.k:
            raise NilconeError(f"Q must be {'symmetric' if self.k % 2 == 0 else 'skew'} for k={self.k}")
        if not self.Q.is_nondegenerate():
            raise NilconeError("Q is degenerate")

    @classmethod
    def from_gram(cls, gram, k: int) -> FormSpace:
        if k < 0:
            raise ValueError("weight k must be non-negative")
        G = gram if isinstance(gram, Matrix) else Matrix(gram)
        return cls(SymForm(G, (-1) ** k), k)

    @property
    def dim(self) -> int:
        return self.Q.dim

    @property
    def gram(self) -> Matrix:
        return self.Q.gram

    @property
    def symmetric(self) -> bool:
        return self.Q.sign == 1

    def in_algebra(self, X: Matrix) -> bool:
        """Q(Xu, v) + Q(u, Xv) = 0, i.e. X^T Q + Q X = 0."""
        G = self.Q.gram
        return (X.T @ G + G @ X).is_zero()

    def preserves(self, g: Matrix) -> bool:
        return g.T @ self.Q.gram @ g == self.Q.gram

    def to_json(self):
        return {"dim": self.dim, "k": self.k, "Q": self.Q.gram.to_json()}

    @classmethod
    def from_json(cls, obj) -> FormSpace:
        space = cls.from_gram(Matrix.from_json(obj["Q"]), int(obj["k"]))
        if "dim" in obj and int(obj["dim"]) != space.dim:
            raise DimensionMismatch("declared dim does not match Q")
        return space


@dataclass(frozen=True)
class NilpotentElement:
    space: FormSpace
    matrix: Matrix

    def __post_init__(self):
        n = self.space.dim
        if self.matrix.shape != (n, n):
            raise DimensionMismatch(f"N has shape {self.matrix.shape}, expected {(n, n)}")
        if not self.space.in_algebra(self.matrix):
            raise NotInAlgebra("N does not lie in End(V, Q)")
        if not self.powers[-1].is_zero():
            raise NotNilpotent("N is not nilpotent")

    @cached_property
    def powers(self) -> list[Matrix]:
        """N^0, ..., N^dim."""
        out = [Matrix.identity(self.space.dim)]
        for _ in range(self.space.dim):
            out.append(out[-1] @ self.matrix)
        return out

    def power(self, j: int) -> Matrix:
        if j < 0:
            raise ValueError("negative power")
        if j >= len(self.powers):
            return Matrix.zeros(self.space.dim)
        return self.powers[j]

    @property
    def k(self) -> int:
        return self.space.k

    @property
    def dim(self) -> int:
        return self.space.dim

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def order(self) -> int:
        """Smallest r with N^r = 0."""
        return next(r for r, P in enumerate(self.powers) if P.is_zero())

    def scaled(self, t) -> NilpotentElement:
        return NilpotentElement(self.space, self.matrix.scale(t))

    def conjugated(self, g: Matrix) -> NilpotentElement:
        """Ad(g) N = g N g^{-1}; g must preserve Q."""
        if not self.space.preserves(g):
            raise NotInAlgebra("g does not preserve Q")
        return NilpotentElement(self.space, g @ self.matrix @ inverse(g))

    def to_json(self):
        return {"space": self.space.to_json(), "N": self.matrix.to_json()}

    @classmethod
    def from_json(cls, obj) -> NilpotentElement:
        return cls(FormSpace.from_json(obj["space"]), Matrix.from_json(obj["N"]))


# --------------------------------------------------------------------------
# Jordan data


def rank_sequence(N: NilpotentElement) -> list[int]:
    return [rank(P) for P in N.powers]


def jordan_type(N: NilpotentElement) -> tuple[int, ...]:
    """m_l = number of N-strings of length l + 1.

    From r_j = rank N^j: m_l = r_l - 2 r_{l+1} + r_{l+2}.  The tuple has
    length at least k + 1 (trailing zeros kept).
    """
    r = rank_sequence(N) + [0, 0]
    top = N.order() - 1
    length = max(N.k + 1, top + 1)
    return tuple(r[l] - 2 * r[l + 1] + r[l + 2] for l in range(length))


@dataclass(frozen=True)
class StringFamily:
    """Highest-weight vectors v_i of the strings v, Nv, ..., N^l v of one length."""

    ell: int
    tops: tuple[tuple, ...]
    # Gram matrix of Q_l(v_i, v_h) = Q(v_i, N^l v_h); diagonal or standard symplectic.
    form: Matrix


def adapted_strings(N: NilpotentElement) -> list[StringFamily]:
    """A Q-adapted Jordan basis, as families of string tops, longest first.

    Strings of different families are Q-orthogonal, and within a family
    Q(N^a v, N^b w) = 0 unless a + b = l, where it equals (-1)^a Q_l(v, w).
    """
    Q = N.space.gram
    eps = N.space.Q.sign
    Nm = N.matrix
    n = N.dim

    def chain(v):
        out = [tuple(v)]
        while any(out[-1]):
            out.append(Nm @ out[-1])
        return out  # last entry is zero

    S = [tuple(r) for r in Matrix.identity(n).rows]
    families = []
    while S:
        chains = [chain(v) for v in S]
        ell = max(len(c) - 2 for c in chains)
        tops = []
        images = Subspace.zero(n)
        for c in chains:
            if len(c) - 2 == ell:
                cand = images + Subspace.span([c[ell]], n)
                if cand.dim > images.dim:
                    images = cand
                    tops.append(c[0])

        def npow(v, j):
            for _ in range(j):
                v = Nm @ v
            return v

        def gram(j, vs):
            return Matrix([[bilinear(vi, Q, npow(vh, j)) for vh in vs] for vi in vs])

        C = gram(ell, tops)
        CinvT = inverse(C).T
        # Kill Q(v_i, N^j v_h) for j < l, top-down; the shift by N^(l-j) only
        # disturbs lower j.
        for j in range(ell - 1, -1, -1):
            cj = gram(j, tops)
            if cj.is_zero():
                continue
            X = cj.scale(Fraction(-1, 2)).T @ CinvT
            t = ell - j
            shifted = [npow(v, t) for v in tops]
            tops = [
                tuple(
                    vi + sum((X[i, h] * s[c] for h, s in enumerate(shifted)), Fraction(0))
                    for c, vi in enumerate(v)
                )
                for i, v in enumerate(tops)
            ]
        C = gram(ell, tops)
        if eps * (-1) ** ell == 1:
            A, d = congruence_diagonalize(C)
            order = sorted(range(len(d)), key=lambda i: (d[i] < 0, i))
            A = Matrix([A.rows[i] for i in order])
        else:
            A = symplectic_basis(C)
        tops = [
            tuple(sum((a * v[c] for a, v in zip(row, tops)), Fraction(0)) for c in range(n))
            for row in A.rows
        ]
        form = gram(ell, tops)
        families.append(StringFamily(ell, tuple(tops), form))
        U = [npow(v, a) for v in tops for a in range(ell + 1)]
        perp = kernel(Matrix([Q.T @ u for u in U]))
        rest = Subspace.span(S, n) & perp
        S = list(rest.basis)
    return families


@dataclass(frozen=True)
class StandardTriple:
    M: Matrix
    Y: Matrix
    N: Matrix

    def __post_init__(self):
        if not self.relations_hold():
            raise NilconeError("triple relations fail")

    def relations_hold(self) -> bool:
        M, Y, N = self.M, self.Y, self.N
        return (
            Y.commutator(M) == M.scale(2)
            and Y.commutator(N) == N.scale(-2)
            and M.commutator(N) == Y
        )


def _strings(N: NilpotentElement, families: list[StringFamily]):
    vecs, labels = [], []
    for fam in families:
        for i, v in enumerate(fam.tops):
            w = v
            for a in range(fam.ell + 1):
                vecs.append(w)
                labels.append((fam.ell, i, a))
                w = N.matrix @ w
    return vecs, labels


def standard_triple(N: NilpotentElement, families: list[StringFamily] | None = None) -> StandardTriple:
    """{M, Y, N} with [Y,M] = 2M, [Y,N] = -2N, [M,N] = Y and M, Y in End(V, Q).

    Y acts by l - 2a on N^a v and M sends N^a v to a (l + 1 - a) N^(a-1) v,
    for the Q-adapted string basis.
    """
    if N.is_zero():
        raise NilconeError("N = 0 is not the nilnegative element of a standard triple")
    families = adapted_strings(N) if families is None else families
    vecs, labels = _strings(N, families)
    n = N.dim
    B = Matrix.from_columns(vecs)
    Binv = inverse(B)
    Yb = [[0] * n for _ in range(n)]
    Mb = [[0] * n for _ in range(n)]
    for col, (ell, _, a) in enumerate(labels):
        Yb[col][col] = ell - 2 * a
        if a > 0:
            Mb[col - 1][col] = a * (ell + 1 - a)
    Y = B @ Matrix(Yb) @ Binv
    M = B @ Matrix(Mb) @ Binv
    triple = StandardTriple(M, Y, N.matrix)
    if not (N.space.in_algebra(M) and N.space.in_algebra(Y)):
        raise NilconeError("standard triple left End(V, Q)")
    return triple


@dataclass(frozen=True)
class JordanData:
    m: tuple[int, ...]
    isotypic: dict
    highest_weight: dict


def y_eigenspace(triple: StandardTriple, lam: int) -> Subspace:
    n = triple.Y.nrows
    return kernel(triple.Y - Matrix.identity(n).scale(lam))


def highest_weight_spaces(N: NilpotentElement, triple: StandardTriple | None = None) -> JordanData:
    """P(l) = ker N^(l+1) ∩ {Y = l} and V(l) = sum_a N^a P(l)."""
    m = jordan_type(N)
    n = N.dim
    if triple is None:
        if N.is_zero():
            full = Subspace.full(n)
            return JordanData(m, {0: full}, {0: full})
        triple = standard_triple(N)
    if triple.N != N.matrix or not triple.relations_hold():
        raise NilconeError("triple is inconsistent with N")
    P, V = {}, {}
    for ell in range(len(m)):
        Pl = kernel(N.power(ell + 1)) & y_eigenspace(triple, ell)
        if Pl.dim != m[ell]:
            raise NilconeError(f"dim P({ell}) = {Pl.dim} but m_{ell} = {m[ell]}")
        Vl = Subspace.zero(n)
        for a in range(ell + 1):
            Vl = Vl + Pl.map(N.power(a))
        if Vl.dim != (ell + 1) * m[ell]:
            raise NilconeError(f"N-strings in V({ell}) are not independent")
        P[ell], V[ell] = Pl, Vl
    total = Subspace.span([v for s in V.values() for v in s.basis], n)
    if total.dim != n or sum(s.dim for s in V.values()) != n:
        raise NilconeError("isotypic components do not decompose V")
    return JordanData(m, V, P)


# --------------------------------------------------------------------------
# weight filtration


class WeightFiltration:
    """W_0 ⊆ ... ⊆ W_2k, centered at k."""

    def __init__(self, N: NilpotentElement, steps: list[Subspace]):
        self.N = N
        self.k = N.k
        self.filtration = Filtration(N.dim, tuple(enumerate(steps)), increasing=True)
        self._gr: dict[int, Quotient] = {}

    def __getitem__(self, i: int) -> Subspace:
        return self.filtration[i]

    def __eq__(self, other):
        if not isinstance(other, WeightFiltration):
            return NotImplemented
        return self.k == other.k and self.filtration == other.filtration

    def __hash__(self):
        return hash((self.k, self.filtration.steps))

    def __repr__(self):
        return f"WeightFiltration(k={self.k}, dims={self.dims()})"

    def dims(self) -> list[int]:
        return [self[i].dim for i in range(2 * self.k + 1)]

    def gr(self, i: int) -> Quotient:
        if i not in self._gr:
            self._gr[i] = Quotient(self[i], self[i - 1])
        return self._gr[i]

    def induced_power(self, j: int, source: int) -> Matrix:
        """N^j : Gr_source -> Gr_(source - 2j)."""
        return self.gr(source).induced_map(self.N.power(j), self.gr(source - 2 * j))

    def first_mismatch(self, other: WeightFiltration) -> int | None:
        for i in range(2 * self.k + 1):
            if self[i] != other[i]:
                return i
        return None

    def check(self) -> list[str]:
        """Both defining properties; returns a list of violations."""
        problems = []
        N = self.N.matrix
        for i in range(2 * self.k + 1):
            if not self[i - 2].contains_space(self[i].map(N)):
                problems.append(f"N W_{i} is not contained in W_{i - 2}")
        if problems:
            return problems
        for ell in range(self.k + 1):
            A = self.induced_power(ell, self.k + ell)
            if not A.is_square or rank(A) != A.nrows:
                problems.append(f"N^{ell}: Gr_{self.k + ell} -> Gr_{self.k - ell} is not an isomorphism")
        return problems

    def to_json(self):
        return {str(i): self[i].to_json() for i in range(2 * self.k + 1)}


def _require_weight_bound(N: NilpotentElement) -> None:
    if not N.power(N.k + 1).is_zero():
        raise NilconeError(f"N^(k+1) != 0 for k = {N.k}; the weight filtration is undefined")


def weight_filtration(N: NilpotentElement, verify: bool = True) -> WeightFiltration:
    """Kernel/image formula: W_(k+l) = sum_(j >= max(0, -l)) ker N^(l+j+1) ∩ im N^j."""
    _require_weight_bound(N)
    n, k = N.dim, N.k
    ker = [kernel(P) for P in N.powers]
    im = [image(P) for P in N.powers]

    def K(r):
        return ker[min(r, n)]

    steps = []
    for ell in range(-k, k + 1):
        acc = Subspace.zero(n)
        for j in range(max(0, -ell), n):
            if im[j].is_zero():
                break
            acc = acc + (K(ell + j + 1) & im[j])
        steps.append(acc)
    wf = WeightFiltration(N, steps)
    if verify:
        problems = wf.check()
        if problems:
            raise NilconeError("; ".join(problems))
    return wf


def weight_filtration_sl2(N: NilpotentElement, triple: StandardTriple | None = None) -> WeightFiltration:
    """W_(k+l) = sum of Y-eigenspaces with eigenvalue <= l."""
    _require_weight_bound(N)
    n, k = N.dim, N.k
    if N.is_zero():
        return WeightFiltration(N, [Subspace.zero(n)] * k + [Subspace.full(n)] * (k + 1))
    triple = standard_triple(N) if triple is None else triple
    eig = {lam: y_eigenspace(triple, lam) for lam in range(-k, k + 1)}
    if sum(E.dim for E in eig.values()) != n:
        raise NilconeError("Y is not diagonalizable with eigenvalues in [-k, k]")
    steps = []
    acc = Subspace.zero(n)
    for ell in range(-k, k + 1):
        acc = acc + eig[ell]
        steps.append(acc)
    return WeightFiltration(N, steps)


# --------------------------------------------------------------------------
# Q_l and primitive parts


def q_ell(N: NilpotentElement, ell: int, wf: WeightFiltration | None = None) -> SymForm:
    """Q_l(u, v) = Q(u, N^l v) on Gr_(k+l), in the quotient's section coordinates."""
    if ell < 0:
        raise ValueError("l must be non-negative")
    wf = weight_filtration(N) if wf is None else wf
    g = wf.gr(N.k + ell)
    G = N.space.gram
    gram = g.induced_form(G, N.power(ell))
    alt = g.induced_form(G, N.power(ell), section=g.alternate_section())
    if alt != gram:
        raise IllDefined(f"Q_{ell} depends on the choice of section")
    sign = (-1) ** (N.k + ell)
    try:
        form = SymForm(gram, sign)
    except NilconeError as exc:
        raise IllDefined(f"Q_{ell} is not (-1)^(k+l)-symmetric") from exc
    if not form.is_nondegenerate():
        raise IllDefined(f"Q_{ell} is degenerate on Gr_{N.k + ell}")
    return form


def primitive_part(wf: WeightFiltration, ell: int) -> Subspace:
    """ker{N^(l+1): Gr_(k+l) -> Gr_(k-l-2)} in Gr_(k+l) coordinates."""
    if ell < 0:
        raise ValueError("l must be non-negative")
    src = wf.k + ell
    A = wf.induced_power(ell + 1, src)
    if A.nrows == 0:
        return Subspace.full(wf.gr(src).dim)
    return kernel(A)


@dataclass(frozen=True)
class OrbitInvariants:
    """(m, s): Jordan multiplicities and signatures s_l of Q_l on primitive parts.

    s carries an entry for every l in [0, k] with k + l even; k = len(m) - 1.
    """

    m: tuple[int, ...]
    s: tuple[tuple[int, tuple[int, int]], ...]

    def __post_init__(self):
        object.__setattr__(self, "m", tuple(int(x) for x in self.m))
        object.__setattr__(
            self, "s", tuple(sorted((int(l), (int(p), int(q))) for l, (p, q) in self.s))
        )

    @classmethod
    def build(cls, m, s: dict) -> OrbitInvariants:
        return cls(tuple(m), tuple((int(l), tuple(pq)) for l, pq in dict(s).items()))

    @property
    def k(self) -> int:
        return len(self.m) - 1

    @property
    def dim(self) -> int:
        return sum((l + 1) * x for l, x in enumerate(self.m))

    @property
    def s_map(self) -> dict[int, tuple[int, int]]:
        return dict(self.s)

    def partition(self) -> tuple[int, ...]:
        return m_to_partition(self.m)

    def to_json(self):
        return {"m": list(self.m), "s": {str(l): [p, q] for l, (p, q) in self.s}}

    @classmethod
    def from_json(cls, obj) -> OrbitInvariants:
        return cls.build(obj["m"], {int(l): tuple(v) for l, v in obj.get("s", {}).items()})


def m_to_partition(m) -> tuple[int, ...]:
    """String lengths with multiplicity, largest first."""
    parts = []
    for ell in range(len(m) - 1, -1, -1):
        parts += [ell + 1] * m[ell]
    return tuple(parts)


def partition_to_m(parts, k: int | None = None) -> tuple[int, ...]:
    top = max(parts, default=1)
    length = top if k is None else max(k + 1, top)
    m = [0] * length
    for p in parts:
        m[p - 1] += 1
    return tuple(m)


def invariants(N: NilpotentElement, wf: WeightFiltration | None = None) -> OrbitInvariants:
    m = jordan_type(N)
    k = N.k
    if len(m) > k + 1:
        raise NilconeError(f"N^(k+1) != 0 for k = {k}")
    wf = weight_filtration(N) if wf is None else wf
    s = {}
    for ell in range(k + 1):
        prim = primitive_part(wf, ell)
        if prim.dim != m[ell]:
            raise NilconeError(f"primitive part at l={ell} has dim {prim.dim}, expected m_{ell}={m[ell]}")
        if (k + ell) % 2:
            continue
        form = q_ell(N, ell, wf).restrict(prim)
        p, q, z = signature(form)
        if z:
            raise IllDefined(f"Q_{ell} is degenerate on the primitive part")
        s[ell] = (p, q)
    inv = OrbitInvariants.build(m, s)
    return inv
