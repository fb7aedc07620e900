"""Exact linear algebra over Q and Q(i).

Vectors are tuples of scalars.  Subspaces are stored by the reduced
row-echelon form of a basis (rows), which is a canonical representative,
so equality of subspaces is equality of the stored tuples.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Sequence

from nilcone.errors import DimensionMismatch, IllDefined, NilconeError
from nilcone.scalars import GaussianRational, conj, encode, to_scalar

REAL = "Q"
GAUSS = "Q(i)"

ZERO = Fraction(0)
ONE = Fraction(1)


def _field_of(entries) -> str:
    for x in entries:
        if isinstance(x, GaussianRational):
            return GAUSS
    return REAL


def _join_fields(*fields: str) -> str:
    return GAUSS if GAUSS in fields else REAL


# --------------------------------------------------------------------------
# matrices


class Matrix:
    """Immutable dense matrix with exact entries (row-major)."""

    __slots__ = ("rows", "nrows", "ncols", "field")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None, field: str | None = None):
        rr = tuple(tuple(to_scalar(x) for x in r) for r in rows)
        if rr:
            width = len(rr[0])
            if any(len(r) != width for r in rr):
                raise DimensionMismatch("ragged matrix rows")
            if ncols is not None and ncols != width:
                raise DimensionMismatch(f"expected {ncols} columns, got {width}")
        else:
            width = ncols or 0
        object.__setattr__(self, "rows", rr)
        object.__setattr__(self, "nrows", len(rr))
        object.__setattr__(self, "ncols", width)
        f = _field_of(x for r in rr for x in r)
        object.__setattr__(self, "field", _join_fields(f, field or REAL))

    @classmethod
    def _raw(cls, rows: tuple, ncols: int, field: str | None = None) -> Matrix:
        m = object.__new__(cls)
        object.__setattr__(m, "rows", rows)
        object.__setattr__(m, "nrows", len(rows))
        object.__setattr__(m, "ncols", ncols)
        if field is None:
            field = _field_of(x for r in rows for x in r)
        object.__setattr__(m, "field", field)
        return m

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    def __reduce__(self):
        return (Matrix._raw, (self.rows, self.ncols, self.field))

    @classmethod
    def identity(cls, n: int) -> Matrix:
        return cls._raw(tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)), n, REAL)

    @classmethod
    def zeros(cls, r: int, c: int | None = None) -> Matrix:
        c = r if c is None else c
        return cls._raw(tuple((ZERO,) * c for _ in range(r)), c, REAL)

    @classmethod
    def diag(cls, entries: Sequence) -> Matrix:
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], nrows: int | None = None) -> Matrix:
        if not cols:
            return cls.zeros(nrows or 0, 0)
        cols = [tuple(c) for c in cols]
        if not cols[0]:
            return cls.zeros(0, len(cols))
        return cls._raw(tuple(zip(*cols)), len(cols))

    @classmethod
    def unit(cls, n: int, i: int, j: int, value=1) -> Matrix:
        """n x n matrix with a single nonzero entry at (i, j)."""
        rows = [[ZERO] * n for _ in range(n)]
        rows[i][j] = to_scalar(value)
        return cls(rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __iter__(self):
        return iter(self.rows)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, self.rows))

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self.rows)
        return f"Matrix[{self.nrows}x{self.ncols}]({body})"

    @property
    def T(self) -> Matrix:
        if not self.nrows:
            return Matrix._raw(tuple(() for _ in range(self.ncols)), 0, self.field)
        return Matrix._raw(tuple(zip(*self.rows)), self.nrows, self.field)

    def conj(self) -> Matrix:
        if self.field == REAL:
            return self
        return Matrix._raw(tuple(tuple(conj(x) for x in r) for r in self.rows), self.ncols, GAUSS)

    @property
    def H(self) -> Matrix:
        return self.conj().T

    def columns(self) -> list[tuple]:
        return list(zip(*self.rows)) if self.nrows else [() for _ in range(self.ncols)]

    def __add__(self, other: Matrix) -> Matrix:
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} + {other.shape}")
        return Matrix._raw(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)),
            self.ncols,
            _join_fields(self.field, other.field),
        )

    def __sub__(self, other: Matrix) -> Matrix:
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} - {other.shape}")
        return Matrix._raw(
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)),
            self.ncols,
            _join_fields(self.field, other.field),
        )

    def __neg__(self) -> Matrix:
        return Matrix._raw(tuple(tuple(-a for a in r) for r in self.rows), self.ncols, self.field)

    def scale(self, c) -> Matrix:
        c = to_scalar(c)
        f = _join_fields(self.field, _field_of([c]))
        return Matrix._raw(tuple(tuple(c * a for a in r) for r in self.rows), self.ncols, f)

    def __mul__(self, c) -> Matrix:
        if isinstance(c, Matrix):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise DimensionMismatch(f"{self.shape} @ {other.shape}")
            cols = other.columns()
            rows = tuple(
                tuple(_dot(r, c) for c in cols)
                for r in self.rows
            )
            return Matrix._raw(rows, other.ncols, _join_fields(self.field, other.field))
        v = tuple(other)
        if len(v) != self.ncols:
            raise DimensionMismatch(f"{self.shape} @ vector of length {len(v)}")
        return tuple(_dot(r, v) for r in self.rows)

    def apply(self, v: Sequence) -> tuple:
        return self @ v

    def __pow__(self, j: int) -> Matrix:
        return matrix_power(self, j)

    def is_zero(self) -> bool:
        return all(not x for r in self.rows for x in r)

    def commutator(self, other: Matrix) -> Matrix:
        return self @ other - other @ self

    def to_json(self):
        return [[encode(x) for x in r] for r in self.rows]

    @classmethod
    def from_json(cls, obj) -> Matrix:
        if not isinstance(obj, list) or any(not isinstance(r, list) for r in obj):
            raise TypeError("matrix must be a list of row lists")
        return cls(obj)


def _dot(u, v):
    s = ZERO
    for a, b in zip(u, v):
        if a and b:
            s = s + a * b
    return s


def bilinear(u: Sequence, gram: Matrix, v: Sequence):
    """u^T G v (no conjugation)."""
    return _dot(u, gram @ v)


def as_matrix(m) -> Matrix:
    return m if isinstance(m, Matrix) else Matrix(m)


# --------------------------------------------------------------------------
# elimination


def _rref_rows(rows: list[list], ncols: int) -> tuple[list[list], list[int]]:
    """In-place Gauss-Jordan; returns (nonzero rows, pivot columns)."""
    rows = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r >= nrows:
            break
        pr = None
        for i in range(r, nrows):
            if rows[i][c]:
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        piv = rows[r][c]
        if piv != 1:
            inv = 1 / piv
            rows[r] = [x * inv if x else x for x in rows[r]]
        prow = rows[r]
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if f:
                    rows[i] = [a - f * b if b else a for a, b in zip(rows[i], prow)]
        pivots.append(c)
        r += 1
    return rows[:r], pivots


def rref(M: Matrix) -> tuple[Matrix, int, list[int]]:
    """Reduced row-echelon form of M, its rank and pivot columns.

    The returned matrix keeps M's shape (zero rows at the bottom).
    """
    M = as_matrix(M)
    nz, piv = _rref_rows(list(M.rows), M.ncols)
    rank = len(nz)
    zero_rows = [(ZERO,) * M.ncols] * (M.nrows - rank)
    R = Matrix._raw(tuple(tuple(r) for r in nz) + tuple(zero_rows), M.ncols, M.field)
    return R, rank, piv


def rank(M: Matrix) -> int:
    M = as_matrix(M)
    return len(_rref_rows(list(M.rows), M.ncols)[1])


def matrix_power(M: Matrix, j: int) -> Matrix:
    M = as_matrix(M)
    if not M.is_square:
        raise DimensionMismatch("matrix_power needs a square matrix")
    if j < 0:
        raise ValueError("negative power")
    out = Matrix.identity(M.nrows)
    for _ in range(j):
        out = out @ M
    return out


def inverse(M: Matrix) -> Matrix:
    M = as_matrix(M)
    if not M.is_square:
        raise DimensionMismatch("inverse of a non-square matrix")
    n = M.nrows
    aug = [list(r) + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(M.rows)]
    nz, piv = _rref_rows(aug, 2 * n)
    if piv[:n] != list(range(n)) or len(nz) < n:
        raise ZeroDivisionError("matrix is singular")
    return Matrix._raw(tuple(tuple(r[n:]) for r in nz), n)


def solve(A: Matrix, b: Sequence) -> tuple | None:
    """Some solution x of A x = b, or None when inconsistent."""
    A = as_matrix(A)
    b = [to_scalar(x) for x in b]
    if len(b) != A.nrows:
        raise DimensionMismatch("rhs length")
    aug = [list(r) + [bi] for r, bi in zip(A.rows, b)]
    nz, piv = _rref_rows(aug, A.ncols + 1)
    if piv and piv[-1] == A.ncols:
        return None
    x = [ZERO] * A.ncols
    for row, c in zip(nz, piv):
        x[c] = row[-1]
    return tuple(x)


def kernel(M: Matrix) -> Subspace:
    """{v : M v = 0} as a subspace of the column space."""
    M = as_matrix(M)
    n = M.ncols
    nz, piv = _rref_rows(list(M.rows), n)
    pset = set(piv)
    basis = []
    for f in range(n):
        if f in pset:
            continue
        v = [ZERO] * n
        v[f] = ONE
        for row, c in zip(nz, piv):
            v[c] = -row[f]
        basis.append(v)
    return Subspace.span(basis, n, field=M.field)


def image(M: Matrix) -> Subspace:
    """Column span of M."""
    M = as_matrix(M)
    return Subspace.span(M.columns(), M.nrows, field=M.field)


# --------------------------------------------------------------------------
# subspaces


@dataclass(frozen=True)
class Subspace:
    ambient: int
    basis: tuple[tuple, ...]
    field: str = REAL
    pivots: tuple[int, ...] = dc_field(default=(), compare=False, repr=False)

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient: int, field: str | None = None) -> Subspace:
        vecs = [[to_scalar(x) for x in v] for v in vectors]
        for v in vecs:
            if len(v) != ambient:
                raise DimensionMismatch(f"vector of length {len(v)} in ambient dimension {ambient}")
        f = _join_fields(_field_of(x for v in vecs for x in v), field or REAL)
        nz, piv = _rref_rows(vecs, ambient)
        return cls(ambient, tuple(tuple(r) for r in nz), f, tuple(piv))

    @classmethod
    def zero(cls, ambient: int, field: str = REAL) -> Subspace:
        return cls(ambient, (), field, ())

    @classmethod
    def full(cls, ambient: int, field: str = REAL) -> Subspace:
        return cls.span(Matrix.identity(ambient).rows, ambient, field)

    def __post_init__(self):
        if not self.pivots and self.basis:
            piv = []
            for r in self.basis:
                piv.append(next(i for i, x in enumerate(r) if x))
            object.__setattr__(self, "pivots", tuple(piv))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def is_zero(self) -> bool:
        return not self.basis

    def is_full(self) -> bool:
        return self.dim == self.ambient

    def reduce(self, v: Sequence) -> tuple:
        """v minus its component along the pivot columns (normal form mod self)."""
        v = list(v)
        for row, c in zip(self.basis, self.pivots):
            f = v[c]
            if f:
                v = [a - f * b if b else a for a, b in zip(v, row)]
        return tuple(v)

    def contains(self, v: Sequence) -> bool:
        if len(v) != self.ambient:
            raise DimensionMismatch("vector length does not match ambient dimension")
        return not any(self.reduce(v))

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def contains_space(self, other: Subspace) -> bool:
        _check_ambient(self, other)
        return all(self.contains(v) for v in other.basis)

    def __le__(self, other: Subspace) -> bool:
        return other.contains_space(self)

    def __ge__(self, other: Subspace) -> bool:
        return self.contains_space(other)

    def coordinates(self, v: Sequence) -> tuple:
        """Coefficients of v in the stored basis; v must lie in the subspace."""
        if not self.contains(v):
            raise NilconeError("vector is not in the subspace")
        return tuple(v[c] for c in self.pivots)

    def complexify(self) -> Subspace:
        return Subspace(self.ambient, self.basis, GAUSS, self.pivots)

    def conj(self) -> Subspace:
        if self.field == REAL:
            return self
        return Subspace.span([[conj(x) for x in r] for r in self.basis], self.ambient, GAUSS)

    def is_real(self) -> bool:
        """True if the subspace is defined over Q (stable under conjugation)."""
        return self.conj() == self

    def map(self, M: Matrix) -> Subspace:
        """Image M(self)."""
        M = as_matrix(M)
        if M.ncols != self.ambient:
            raise DimensionMismatch("map domain does not match ambient dimension")
        return Subspace.span([M @ v for v in self.basis], M.nrows, _join_fields(self.field, M.field))

    def preimage(self, M: Matrix) -> Subspace:
        """{v : M v in self}."""
        M = as_matrix(M)
        if M.nrows != self.ambient:
            raise DimensionMismatch("map codomain does not match ambient dimension")
        # v in preimage iff every annihilator functional of self kills M v.
        ann = annihilator(self)
        if ann.is_zero():
            return Subspace.full(M.ncols, _join_fields(self.field, M.field))
        A = Matrix(ann.basis) @ M
        k = kernel(A)
        return Subspace(k.ambient, k.basis, _join_fields(k.field, self.field), k.pivots)

    def matrix(self) -> Matrix:
        return Matrix._raw(self.basis, self.ambient, self.field)

    def __add__(self, other: Subspace) -> Subspace:
        return sum_spaces(self, other)

    def __and__(self, other: Subspace) -> Subspace:
        return intersect(self, other)

    def to_json(self):
        return {"ambient": self.ambient, "basis": [[encode(x) for x in r] for r in self.basis]}

    @classmethod
    def from_json(cls, obj) -> Subspace:
        return cls.span(obj["basis"], int(obj["ambient"]))


def _check_ambient(A: Subspace, B: Subspace) -> None:
    if A.ambient != B.ambient:
        raise DimensionMismatch(f"ambient dimensions {A.ambient} and {B.ambient} differ")


def _check_fields(A: Subspace, B: Subspace) -> None:
    _check_ambient(A, B)
    if A.field != B.field:
        raise DimensionMismatch(f"scalar kinds {A.field} and {B.field} differ; complexify first")


def sum_spaces(A: Subspace, B: Subspace) -> Subspace:
    _check_fields(A, B)
    return Subspace.span(A.basis + B.basis, A.ambient, A.field)


def intersect(A: Subspace, B: Subspace) -> Subspace:
    """Zassenhaus: rows [a | a], [b | 0]; echelon rows with zero left half span A ∩ B."""
    _check_fields(A, B)
    n = A.ambient
    if A.is_zero() or B.is_zero():
        return Subspace.zero(n, A.field)
    zero = (ZERO,) * n
    rows = [list(a) + list(a) for a in A.basis] + [list(b) + list(zero) for b in B.basis]
    nz, piv = _rref_rows(rows, 2 * n)
    inter = [r[n:] for r, c in zip(nz, piv) if c >= n]
    return Subspace.span(inter, n, A.field)


def annihilator(A: Subspace) -> Subspace:
    """{w : a . w = 0 for all a in A} (bilinear dot, no conjugation)."""
    if A.is_zero():
        return Subspace.full(A.ambient, A.field)
    k = kernel(A.matrix())
    return Subspace(k.ambient, k.basis, A.field, k.pivots)


def direct_sum_check(parts: Sequence[Subspace], ambient: int) -> tuple[bool, Subspace]:
    """Whether the parts are independent; returns (independent, their sum)."""
    fld = _join_fields(*(p.field for p in parts)) if parts else REAL
    vecs = [v for p in parts for v in p.basis]
    total = Subspace.span(vecs, ambient, fld)
    return total.dim == sum(p.dim for p in parts), total


# --------------------------------------------------------------------------
# quotients


class Quotient:
    """hi / lo with an explicit section.

    The section is the echelon basis of {reduce_lo(h) : h in hi}; its vectors
    vanish on lo's pivot columns, so coordinates in the quotient are read off
    at the section's pivot columns after reducing modulo lo.
    """

    def __init__(self, hi: Subspace, lo: Subspace):
        _check_ambient(hi, lo)
        if not hi.contains_space(lo):
            raise NilconeError("quotient needs lo contained in hi")
        fld = _join_fields(hi.field, lo.field)
        self.hi = hi
        self.lo = lo
        self.ambient = hi.ambient
        self.field = fld
        sec = Subspace.span([lo.reduce(h) for h in hi.basis], hi.ambient, fld)
        self.section = sec.basis
        self._sec_pivots = sec.pivots
        self.dim = len(self.section)
        assert self.dim == hi.dim - lo.dim

    def __repr__(self):
        return f"Quotient(dim={self.dim}, hi={self.hi.dim}, lo={self.lo.dim})"

    def coords(self, v: Sequence) -> tuple:
        if not self.hi.contains(v):
            raise NilconeError("vector is not in the numerator of the quotient")
        r = self.lo.reduce(v)
        return tuple(r[c] for c in self._sec_pivots)

    def lift(self, c: Sequence) -> tuple:
        v = [ZERO] * self.ambient
        for ci, s in zip(c, self.section):
            if ci:
                v = [a + ci * b for a, b in zip(v, s)]
        return tuple(v)

    def projection_matrix(self) -> Matrix:
        """Matrix P with P v = coords(v) for every v in hi."""
        n = self.ambient
        cols = [self.lo.reduce(tuple(ONE if i == j else ZERO for i in range(n))) for j in range(n)]
        rows = [[cols[j][c] for j in range(n)] for c in self._sec_pivots]
        return Matrix._raw(tuple(tuple(r) for r in rows), n)

    def image_of(self, S: Subspace) -> Subspace:
        """(S + lo)/lo as a subspace of the quotient coordinates; S must lie in hi."""
        return Subspace.span([self.coords(v) for v in S.basis], self.dim, _join_fields(S.field, self.field))

    def induced_map(self, L: Matrix, target: Quotient | None = None) -> Matrix:
        """Matrix of the map hi/lo -> target.hi/target.lo induced by L."""
        L = as_matrix(L)
        target = self if target is None else target
        for v in self.lo.basis:
            if not target.lo.contains(L @ v):
                raise IllDefined("map does not send the denominator into the target denominator")
        cols = []
        for s in self.section:
            w = L @ s
            if not target.hi.contains(w):
                raise IllDefined("map does not send the numerator into the target numerator")
            cols.append(target.coords(w))
        return Matrix.from_columns(cols, target.dim) if cols else Matrix.zeros(target.dim, 0)

    def induced_form(self, gram: Matrix, right: Matrix | None = None, section: Sequence | None = None) -> Matrix:
        """Gram matrix of (u, v) -> u^T G R v on the quotient.

        Raises IllDefined unless the pairing kills lo on both sides.
        """
        gram = as_matrix(gram)
        R = Matrix.identity(self.ambient) if right is None else as_matrix(right)
        GR = gram @ R
        for a in self.lo.basis:
            for h in self.hi.basis:
                if bilinear(a, GR, h) or bilinear(h, GR, a):
                    raise IllDefined("form does not descend to the quotient")
        sec = self.section if section is None else section
        return Matrix([[bilinear(u, GR, v) for v in sec] for u in sec])

    def alternate_section(self) -> list[tuple]:
        """Section shifted by denominator vectors; used to check well-definedness."""
        if self.lo.is_zero():
            return list(self.section)
        shift = [ZERO] * self.ambient
        for i, b in enumerate(self.lo.basis):
            shift = [a + (i + 1) * x for a, x in zip(shift, b)]
        return [tuple(a + (j + 1) * x for a, x in zip(s, shift)) for j, s in enumerate(self.section)]


def quotient(hi: Subspace, lo: Subspace) -> tuple[Quotient, Matrix]:
    q = Quotient(hi, lo)
    return q, q.projection_matrix()


# --------------------------------------------------------------------------
# filtrations


@dataclass(frozen=True)
class Filtration:
    """Indexed chain of subspaces.

    Outside the stored index range an increasing filtration is 0 below and
    its top step above; a decreasing one is its first step below and 0 above.
    """

    ambient: int
    steps: tuple[tuple[int, Subspace], ...]
    increasing: bool = True

    def __post_init__(self):
        idx = [i for i, _ in self.steps]
        if idx != sorted(idx) or len(set(idx)) != len(idx):
            raise NilconeError("filtration indices must be strictly increasing")
        for (_, a), (_, b) in zip(self.steps, self.steps[1:]):
            ok = b.contains_space(a) if self.increasing else a.contains_space(b)
            if not ok:
                raise NilconeError("filtration steps are not nested")

    @property
    def indices(self) -> list[int]:
        return [i for i, _ in self.steps]

    def __getitem__(self, i: int) -> Subspace:
        if not self.steps:
            return Subspace.zero(self.ambient)
        lo, hi = self.steps[0][0], self.steps[-1][0]
        fld = self.steps[0][1].field
        if self.increasing:
            if i < lo:
                return Subspace.zero(self.ambient, fld)
            if i >= hi:
                return self.steps[-1][1]
        else:
            if i <= lo:
                return self.steps[0][1]
            if i > hi:
                return Subspace.zero(self.ambient, fld)
        for j, s in reversed(self.steps) if self.increasing else self.steps:
            if (self.increasing and j <= i) or (not self.increasing and j >= i):
                return s
        raise AssertionError("unreachable")

    def dims(self) -> list[int]:
        return [s.dim for _, s in self.steps]

    def complexify(self) -> Filtration:
        return Filtration(self.ambient, tuple((i, s.complexify()) for i, s in self.steps), self.increasing)


# --------------------------------------------------------------------------
# forms


@dataclass(frozen=True)
class SymForm:
    """Bilinear form with gram^T = sign * gram."""

    gram: Matrix
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if not self.gram.is_square:
            raise DimensionMismatch("gram matrix must be square")
        if self.gram.T != self.gram.scale(self.sign):
            raise NilconeError("gram matrix does not have the declared symmetry")

    @property
    def dim(self) -> int:
        return self.gram.nrows

    def __call__(self, u, v):
        return bilinear(u, self.gram, v)

    def restrict(self, S: Subspace) -> SymForm:
        B = S.matrix()
        return SymForm(B @ self.gram @ B.T, self.sign)

    def congruent(self, A: Matrix) -> SymForm:
        """A^T G A."""
        return SymForm(A.T @ self.gram @ A, self.sign)

    def is_nondegenerate(self) -> bool:
        return rank(self.gram) == self.dim


@dataclass(frozen=True)
class HermForm:
    """h(u, v) = u^T G conj(v) with G^H = G."""

    gram: Matrix

    def __post_init__(self):
        if not self.gram.is_square:
            raise DimensionMismatch("gram matrix must be square")
        if self.gram.H != self.gram:
            raise NilconeError("gram matrix is not Hermitian")

    @property
    def dim(self) -> int:
        return self.gram.nrows

    def __call__(self, u, v):
        return bilinear(u, self.gram, [conj(x) for x in v])


def signature(f: SymForm) -> tuple[int, int, int]:
    """(p, q, z) by congruence diagonalization.

    A vanishing diagonal with a nonzero off-diagonal entry a_ij is split off
    as the hyperbolic block [[0, a], [a, 0]], which contributes (1, 1).
    """
    if f.sign != 1:
        raise NilconeError("signature is defined for symmetric forms only")
    A = [list(r) for r in f.gram.rows]
    p = q = 0
    while A:
        n = len(A)
        piv = next((i for i in range(n) if A[i][i]), None)
        if piv is not None:
            d = A[piv][piv]
            if d > 0:
                p += 1
            else:
                q += 1
            col = [A[i][piv] for i in range(n)]
            rest = [i for i in range(n) if i != piv]
            A = [[A[i][j] - col[i] * col[j] / d for j in rest] for i in rest]
            continue
        pair = next(((i, j) for i in range(n) for j in range(i + 1, n) if A[i][j]), None)
        if pair is None:
            break
        i0, j0 = pair
        a = A[i0][j0]
        p += 1
        q += 1
        rest = [i for i in range(n) if i not in pair]
        # Schur complement of [[0, a], [a, 0]]; its inverse is [[0, 1/a], [1/a, 0]].
        A = [
            [A[r][c] - (A[r][i0] * A[j0][c] + A[r][j0] * A[i0][c]) / a for c in rest]
            for r in rest
        ]
    z = len(A)
    return p, q, z


def ldl_pivots(h: HermForm) -> tuple[list, list[tuple]]:
    """Pivots of an exact LDL* sweep and the congruence rows realizing them.

    Returns (pivots, rows) with h(rows[i], rows[i]) == pivots[i]; the sweep
    stops at the first non-positive pivot.
    """
    n = h.dim
    A = [list(r) for r in h.gram.rows]
    T = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    pivots = []
    rows = []
    for k in range(n):
        d = A[k][k]
        d = d.re if isinstance(d, GaussianRational) else d
        pivots.append(d)
        rows.append(tuple(T[k]))
        if d <= 0:
            break
        for i in range(k + 1, n):
            c = A[i][k] / d
            if not c:
                continue
            cc = conj(c)
            A[i] = [a - c * b for a, b in zip(A[i], A[k])]
            for r in range(n):
                A[r][i] = A[r][i] - cc * A[r][k]
            T[i] = [a - c * b for a, b in zip(T[i], T[k])]
    return pivots, rows


def is_positive_definite(h: HermForm) -> bool:
    if h.dim == 0:
        return True
    pivots, _ = ldl_pivots(h)
    return len(pivots) == h.dim and all(d > 0 for d in pivots)


def positivity_witness(h: HermForm) -> tuple | None:
    """A nonzero v with h(v, v) <= 0, or None if h is positive definite."""
    pivots, rows = ldl_pivots(h)
    if pivots and pivots[-1] <= 0:
        return rows[-1]
    return None


def congruence_diagonalize(gram: Matrix) -> tuple[Matrix, list]:
    """A with A G A^T diagonal, for symmetric G; returns (A, diagonal)."""
    n = gram.nrows
    G = [list(r) for r in gram.rows]
    A = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    for k in range(n):
        if not G[k][k]:
            j = next((j for j in range(k + 1, n) if G[j][j]), None)
            if j is not None:
                G[k], G[j] = G[j], G[k]
                for r in G:
                    r[k], r[j] = r[j], r[k]
                A[k], A[j] = A[j], A[k]
            else:
                j = next((j for j in range(k + 1, n) if G[k][j]), None)
                if j is None:
                    continue
                # row/col k += row/col j makes the diagonal 2 G[k][j] != 0
                G[k] = [a + b for a, b in zip(G[k], G[j])]
                for r in G:
                    r[k] = r[k] + r[j]
                A[k] = [a + b for a, b in zip(A[k], A[j])]
        d = G[k][k]
        for i in range(k + 1, n):
            c = G[i][k] / d
            if not c:
                continue
            G[i] = [a - c * b for a, b in zip(G[i], G[k])]
            for r in G:
                r[i] = r[i] - c * r[k]
            A[i] = [a - c * b for a, b in zip(A[i], A[k])]
    return Matrix(A), [G[i][i] for i in range(n)]


def symplectic_basis(gram: Matrix) -> Matrix:
    """A with A G A^T = blockdiag([[0, 1], [-1, 0]], ...) for nondegenerate skew G."""
    n = gram.nrows
    vecs = [tuple(r) for r in Matrix.identity(n).rows]
    out = []

    def w(u, v):
        return bilinear(u, gram, v)

    while vecs:
        e = vecs.pop(0)
        j = next((j for j, f in enumerate(vecs) if w(e, f)), None)
        if j is None:
            raise NilconeError("skew form is degenerate")
        f = vecs.pop(j)
        c = w(e, f)
        f = tuple(x / c for x in f)
        out += [e, f]
        new = []
        for x in vecs:
            a, b = w(x, f), w(x, e)
            new.append(tuple(xi - a * ei + b * fi for xi, ei, fi in zip(x, e, f)))
        vecs = new
    return Matrix(out)
