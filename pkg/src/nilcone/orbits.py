"""Conjugacy classes of nilpotents in End(V, Q) from their invariants (m, s).

Covers validity of invariant pairs, splitting of Ad(G)-classes under the
identity component (complex and real cases), normal-form representatives,
exhaustive catalogs and the two partial orders on Jordan data.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from nilcone.errors import InvalidInvariants
from nilcone.linalg import Matrix, SymForm, signature
from nilcone.nilpotent import FormSpace, NilpotentElement, OrbitInvariants, invariants, m_to_partition

REAL_FIELD = "real"
COMPLEX_FIELD = "complex"
IDENTITY_COMPONENT = "identity_component"
FULL_GROUP = "full"


@dataclass(frozen=True)
class ClassLabel:
    invariants: OrbitInvariants
    field: str
    group: str
    split: bool
    # which branch of the splitting criterion decided `split`
    case: str = ""

    def to_json(self):
        out = self.invariants.to_json()
        out.update({"field": self.field, "group": self.group, "split": self.split})
        if self.case:
            out["case"] = self.case
        return out

    @classmethod
    def from_json(cls, obj) -> ClassLabel:
        return cls(OrbitInvariants.from_json(obj), obj["field"], obj["group"], bool(obj["split"]), obj.get("case", ""))


@dataclass
class Validation:
    ok: bool
    problems: list[str] = field(default_factory=list)

    def __bool__(self):
        return self.ok


def symmetric_levels(k: int) -> list[int]:
    """Levels l in [0, k] where Q_l is symmetric (k + l even)."""
    return [l for l in range(k + 1) if (k + l) % 2 == 0]


def _normalize_s(s) -> dict[int, tuple[int, int]]:
    if s is None:
        return {}
    if isinstance(s, OrbitInvariants):
        return s.s_map
    return {int(l): (int(pq[0]), int(pq[1])) for l, pq in dict(s).items()}


def validate_invariants(m, s, k: int, dim: int, q_signature: tuple[int, int] | None = None) -> Validation:
    """Check that (m, s) can be the invariants of a nilpotent in End(V, Q).

    With ``q_signature`` given (symmetric Q only), also require that the
    normal-form representative has that signature.
    """
    m = tuple(m)
    s = _normalize_s(s)
    problems = []
    if len(m) != k + 1:
        problems.append(f"m has length {len(m)}, expected k + 1 = {k + 1}")
    if any(x < 0 for x in m):
        problems.append("negative multiplicity")
    total = sum((l + 1) * x for l, x in enumerate(m))
    if total != dim:
        problems.append(f"sum (l+1) m_l = {total} != dim {dim}")
    for l, x in enumerate(m):
        if (k + l) % 2 and x % 2:
            problems.append(f"m_{l} = {x} must be even since k + l is odd")
    want = set(symmetric_levels(k))
    if set(s) != want:
        problems.append(f"s must have entries exactly at levels {sorted(want)}, got {sorted(s)}")
    for l, (p, q) in s.items():
        if p < 0 or q < 0:
            problems.append(f"s_{l} has a negative entry")
        if 0 <= l < len(m) and p + q != m[l]:
            problems.append(f"s_{l} = {(p, q)} does not sum to m_{l} = {m[l]}")
    if q_signature is not None:
        if k % 2:
            problems.append("a signature was given but Q is skew for odd k")
        elif not problems:
            sig = representative_signature(m, s, k)
            if sig != tuple(q_signature):
                problems.append(f"invariants force signature {sig}, not {tuple(q_signature)}")
    return Validation(not problems, problems)


def classify_complex(m, q_sign: int) -> ClassLabel:
    """Ad(G_C°)-classes: a class splits iff Q is symmetric, every m_(2l) = 0
    and every m_(2l+1) is even; otherwise it is a single Ad(G_C°)-orbit."""
    m = tuple(m)
    if q_sign not in (1, -1):
        raise ValueError("q_sign must be +1 or -1")
    kpar = 0 if q_sign == 1 else 1
    if any(x < 0 for x in m) or any(x % 2 for l, x in enumerate(m) if (kpar + l) % 2):
        raise InvalidInvariants(f"m = {m} violates the parity rule for this Q")
    if not any(m):
        raise InvalidInvariants("empty Jordan type")
    even_zero = all(x == 0 for l, x in enumerate(m) if l % 2 == 0)
    odd_even = all(x % 2 == 0 for l, x in enumerate(m) if l % 2 == 1)
    split = q_sign == 1 and even_zero and odd_even
    inv = OrbitInvariants.build(m, {})
    return ClassLabel(inv, COMPLEX_FIELD, IDENTITY_COMPONENT, split, "Co(a)" if split else "Co(b)")


def _definite_sign(pq: tuple[int, int]) -> int:
    p, q = pq
    if q == 0 and p > 0:
        return 1
    if p == 0 and q > 0:
        return -1
    return 0


def classify_real(m, s, k: int) -> ClassLabel:
    """Ad(G_R°)-classes for a real form of weight k.

    For symmetric Q (k even) the class splits in two when either every
    m_l with l even vanishes, or the nonzero Q_l at even l are all
    (-1)^(l/2)-definite, or all (-1)^(l/2 + 1)-definite.  For skew Q the class
    is a single Ad(G_R°)-orbit.
    """
    m = tuple(m)
    s = _normalize_s(s)
    dim = sum((l + 1) * x for l, x in enumerate(m))
    v = validate_invariants(m, s, k, dim)
    if not v:
        raise InvalidInvariants("; ".join(v.problems))
    inv = OrbitInvariants.build(m, s)
    if k % 2:
        return ClassLabel(inv, REAL_FIELD, IDENTITY_COMPONENT, False, "skew")
    live = [l for l in range(0, k + 1, 2) if m[l]]
    if not live:
        return ClassLabel(inv, REAL_FIELD, IDENTITY_COMPONENT, True, "a")
    signs = [_definite_sign(s[l]) * (-1) ** (l // 2) for l in live]
    if all(x == 1 for x in signs):
        return ClassLabel(inv, REAL_FIELD, IDENTITY_COMPONENT, True, "b(i)")
    if all(x == -1 for x in signs):
        return ClassLabel(inv, REAL_FIELD, IDENTITY_COMPONENT, True, "b(ii)")
    return ClassLabel(inv, REAL_FIELD, IDENTITY_COMPONENT, False, "otherwise")


def classify(N: NilpotentElement) -> ClassLabel:
    inv = invariants(N)
    return classify_real(inv.m, inv.s_map, N.k)


# --------------------------------------------------------------------------
# normal forms


@dataclass(frozen=True)
class RepresentativeString:
    ell: int
    # index of the string's top vector in the basis; the string occupies
    # positions start .. start + ell
    start: int
    # +1 / -1 for a diagonal Q_l entry, or ("pair", partner_start, role)
    kind: tuple


def representative_layout(m, s, k: int) -> list[RepresentativeString]:
    """Order of strings in the normal form: longest first; within a length,
    positive then negative Q_l entries, or symplectic pairs (v, w)."""
    s = _normalize_s(s)
    out = []
    pos = 0
    for ell in range(len(m) - 1, -1, -1):
        if not m[ell]:
            continue
        if (k + ell) % 2 == 0:
            p, q = s[ell]
            for sign in [1] * p + [-1] * q:
                out.append(RepresentativeString(ell, pos, ("diag", sign)))
                pos += ell + 1
        else:
            for _ in range(m[ell] // 2):
                v, w = pos, pos + ell + 1
                out.append(RepresentativeString(ell, v, ("pair", w, 0)))
                out.append(RepresentativeString(ell, w, ("pair", v, 1)))
                pos += 2 * (ell + 1)
    return out


def construct_representative(m, s, k: int) -> tuple[FormSpace, NilpotentElement]:
    """Normal form: N shifts each string v -> Nv -> ... -> N^l v -> 0, and
    Q(N^a v, N^(l-a) w) = (-1)^a Q_l(v, w) with Q_l = diag(+1^p, -1^q) or
    standard symplectic; all other pairings vanish."""
    m = tuple(m)
    s = _normalize_s(s)
    dim = sum((l + 1) * x for l, x in enumerate(m))
    v = validate_invariants(m, s, k, dim)
    if not v:
        raise InvalidInvariants("; ".join(v.problems))
    layout = representative_layout(m, s, k)
    G = [[Fraction(0)] * dim for _ in range(dim)]
    Nm = [[Fraction(0)] * dim for _ in range(dim)]
    for st in layout:
        ell = st.ell
        for a in range(ell):
            Nm[st.start + a + 1][st.start + a] = Fraction(1)
        if st.kind[0] == "diag":
            partner, ql = st.start, st.kind[1]
        else:
            partner = st.kind[1]
            ql = 1 if st.kind[2] == 0 else -1
        for a in range(ell + 1):
            G[st.start + a][partner + ell - a] = Fraction((-1) ** a * ql)
    space = FormSpace.from_gram(Matrix(G), k)
    return space, NilpotentElement(space, Matrix(Nm))


def representative_signature(m, s, k: int) -> tuple[int, int]:
    """Signature of Q for the normal-form representative (k even)."""
    if k % 2:
        raise ValueError("Q is skew for odd k")
    space, _ = construct_representative(m, s, k)
    p, q, _z = signature(space.Q)
    return p, q


# --------------------------------------------------------------------------
# catalogs


def jordan_types(dim: int, k: int):
    """All m of length k + 1 with sum (l+1) m_l = dim obeying the parity rule."""

    def rec(ell, remaining):
        if ell < 0:
            if remaining == 0:
                yield ()
            return
        size = ell + 1
        step = 2 if (k + ell) % 2 else 1
        for x in range(0, remaining // size + 1, step):
            for rest in rec(ell - 1, remaining - x * size):
                yield rest + (x,)

    yield from (t for t in rec(k, dim))


def enumerate_invariants(dim: int, k: int):
    """Every valid (m, s) for the given dimension and weight."""
    for m in jordan_types(dim, k):
        levels = symmetric_levels(k)
        choices = [[(p, m[l] - p) for p in range(m[l], -1, -1)] for l in levels]
        for combo in product(*choices):
            yield OrbitInvariants.build(m, dict(zip(levels, combo)))


@dataclass(frozen=True)
class CatalogEntry:
    dim: int
    k: int
    label: ClassLabel
    q_signature: tuple[int, int] | None

    def to_json(self):
        out = {"dim": self.dim, "k": self.k}
        out.update(self.label.to_json())
        out["q_signature"] = list(self.q_signature) if self.q_signature else None
        return out


def catalog(dim_max: int, parity: str = "all", k_values=None) -> list[CatalogEntry]:
    """Exhaustive list of real classes for 1 <= dim <= dim_max.

    By default k runs over 0 .. dim - 1, so every Jordan type occurs for the
    largest k; ``parity`` restricts to even or odd k.
    """
    out = []
    for dim in range(1, dim_max + 1):
        ks = range(dim) if k_values is None else k_values
        for k in ks:
            if parity == "even" and k % 2:
                continue
            if parity == "odd" and k % 2 == 0:
                continue
            for inv in enumerate_invariants(dim, k):
                label = classify_real(inv.m, inv.s_map, k)
                sig = None if k % 2 else representative_signature(inv.m, inv.s_map, k)
                out.append(CatalogEntry(dim, k, label, sig))
    return out


# --------------------------------------------------------------------------
# partial orders


class PosetRelation(enum.Enum):
    EQUAL = "equal"
    GREATER = "greater"
    LESS = "less"
    INCOMPARABLE = "incomparable"


def _compare_sums(a: list[int], b: list[int]) -> PosetRelation:
    ge = all(x >= y for x, y in zip(a, b))
    le = all(x <= y for x, y in zip(a, b))
    if ge and le:
        return PosetRelation.EQUAL
    if ge:
        return PosetRelation.GREATER
    if le:
        return PosetRelation.LESS
    return PosetRelation.INCOMPARABLE


def _dim_of(m) -> int:
    return sum((l + 1) * x for l, x in enumerate(m))


def order_paper(m, m2) -> PosetRelation:
    """m >= m' iff sum_(1<=i<=l) m_i >= sum_(1<=i<=l) m'_i for every l (taken literally)."""
    if _dim_of(m) != _dim_of(m2):
        raise InvalidInvariants("tuples describe different dimensions")
    n = max(len(m), len(m2))
    a = list(m) + [0] * (n - len(m))
    b = list(m2) + [0] * (n - len(m2))
    sa, sb, acc_a, acc_b = [], [], 0, 0
    for i in range(1, n):
        acc_a += a[i]
        acc_b += b[i]
        sa.append(acc_a)
        sb.append(acc_b)
    return _compare_sums(sa, sb)


def order_dominance(lam, lam2) -> PosetRelation:
    """Dominance order on partitions (parts in any order)."""
    a = sorted(lam, reverse=True)
    b = sorted(lam2, reverse=True)
    if sum(a) != sum(b):
        raise InvalidInvariants("partitions of different sizes")
    n = max(len(a), len(b))
    a += [0] * (n - len(a))
    b += [0] * (n - len(b))
    sa, sb, x, y = [], [], 0, 0
    for i in range(n):
        x += a[i]
        y += b[i]
        sa.append(x)
        sb.append(y)
    return _compare_sums(sa, sb)


def closure_consistency(label: ClassLabel, other: ClassLabel) -> bool:
    """False when neither class can lie in the closure of the other.

    Proper containment of a class in the closure of another forces a
    strictly smaller Jordan partition, so equal or incomparable partitions
    exclude it both ways.
    """
    rel = order_dominance(m_to_partition(label.invariants.m), m_to_partition(other.invariants.m))
    return rel in (PosetRelation.GREATER, PosetRelation.LESS)
