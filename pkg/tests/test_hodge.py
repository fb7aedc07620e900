import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import catalog_upto
from nilcone.errors import InvalidInvariants, NilconeError
from nilcone.hodge import (
    HodgeFlag,
    HodgeNumbers,
    deligne_splitting,
    flag_dims,
    hodge_decomposition,
    in_compact_dual,
    in_period_domain,
    is_lmhs,
    is_polarized,
    orbit_point,
    polarized,
    primitive_splitting,
    representative_flag,
)
from nilcone.linalg import GAUSS, HermForm, Matrix, Subspace, bilinear
from nilcone.nilpotent import FormSpace, NilpotentElement, jordan_type, weight_filtration
from nilcone.orbits import construct_representative
from nilcone.sampling import random_group_element
from nilcone.scalars import I, conj, real_part

ELLIPTIC = ((0, 1), {1: (1, 0)}, 1)


@pytest.fixture
def elliptic():
    space, N = construct_representative(*ELLIPTIC)
    return space, N, HodgeFlag.from_vectors(1, {1: [[1, 0]]}, 2)


def flipped(space, N):
    sp = FormSpace.from_gram(-space.gram, space.k)
    return sp, NilpotentElement(sp, N.matrix)


def weight2_pure():
    space = FormSpace.from_gram(Matrix.diag([-1, -1, 1]), 2)
    F = HodgeFlag.from_vectors(2, {1: [[1, I, 0], [0, 0, 1]], 2: [[1, I, 0]]}, 3)
    return space, F


# --------------------------------------------------------------------------
# flags and pure Hodge structures


def test_hodge_numbers_and_flag_dims():
    h = HodgeNumbers.build(2, {(2, 0): 1, (1, 1): 1, (0, 2): 1})
    assert h.dim == 3 and flag_dims(h) == (3, 2, 1)
    with pytest.raises(NilconeError):
        HodgeNumbers.build(2, {(2, 0): 1})
    with pytest.raises(NilconeError):
        HodgeNumbers.build(2, {(1, 0): 1})


def test_flag_validation():
    with pytest.raises(NilconeError):
        HodgeFlag.from_vectors(2, {1: [[1, 0, 0]], 2: [[0, 1, 0]]}, 3)  # not nested
    with pytest.raises(NilconeError):
        HodgeFlag.from_vectors(2, {2: [[1, 0, 0]]}, 3)  # F^1 missing
    F = HodgeFlag.from_vectors(1, {1: [[1, I]]}, 2)
    assert F[0].dim == 2 and F[2].dim == 0 and F.dims() == (2, 1)
    assert HodgeFlag.from_json(F.to_json(), 2) == F


def test_polarized_weight1():
    space, _ = construct_representative(*ELLIPTIC)
    good = HodgeFlag.from_vectors(1, {1: [[1, I]]}, 2)
    bad = HodgeFlag.from_vectors(1, {1: [[1, -I]]}, 2)
    assert polarized(good, space)
    # i^(1-0) Q(v, conj v) for v = e1 + i e2
    v = (1, I)
    assert I * bilinear(v, space.gram, [conj(x) for x in v]) == 2
    checks = is_polarized(bad, space)
    failed = [c for c in checks if not c.passed]
    assert [c.name for c in failed] == ["positivity"]
    w = failed[0].witness[0]
    assert any(w)


def test_pure_weight2():
    space, F = weight2_pure()
    assert in_compact_dual(F, space)
    dec = hodge_decomposition(F)
    assert dec.is_hodge
    assert dec.numbers() == {(2, 0): 1, (1, 1): 1, (0, 2): 1}
    assert in_period_domain(F, space)


def test_compact_dual_diagnostics():
    space, F = weight2_pure()
    c = in_compact_dual(F, space, f=(3, 1, 1))
    assert not c and "dims" in c.detail
    bad = HodgeFlag.from_vectors(2, {1: [[1, 0, 0], [0, 0, 1]], 2: [[1, 0, 0]]}, 3)
    c = in_compact_dual(bad, space)
    assert not c and c.witness is not None
    assert bilinear(c.witness[0], space.gram, c.witness[1]) != 0


def test_not_a_hodge_structure():
    # a real F^1 cannot give a weight-1 Hodge structure
    F = HodgeFlag.from_vectors(1, {1: [[1, 0]]}, 2)
    dec = hodge_decomposition(F)
    assert not dec.is_hodge


# --------------------------------------------------------------------------
# limiting mixed Hodge structures


def test_elliptic_lmhs(elliptic):
    space, N, F = elliptic
    rec = is_lmhs(F, N)
    assert rec.verdict
    sp = rec.splitting
    assert sp.ok and sp.real_split()
    assert sp.numbers() == {(1, 1): 1, (0, 0): 1}
    assert sp[(1, 1)] == Subspace.span([[1, 0]], 2, GAUSS)
    assert sp[(0, 0)] == Subspace.span([[0, 1]], 2, GAUSS)


def test_flipped_sign_breaks_only_positivity(elliptic):
    space, N, F = elliptic
    sp2, N2 = flipped(space, N)
    rec = is_lmhs(F, N2)
    assert rec.failed() == ["positivity"]
    bad = next(c for c in rec.checks if c.name == "positivity")
    w = bad.witness[0]
    # Q_1(w, conj w) = Q(w, N conj w) <= 0 on the witness
    val = bilinear(w, sp2.gram, N2.matrix @ [conj(x) for x in w])
    assert val == conj(val) and real_part(val) <= 0


def test_horizontality_failure():
    m, s, k = (0, 0, 0, 1), {1: (0, 0), 3: (1, 0)}, 3
    space, N = construct_representative(m, s, k)
    F = representative_flag(m, s, k)
    N3 = NilpotentElement(space, N.power(3))
    rec = is_lmhs(F, N3)
    assert "horizontality" in rec.failed()
    hor = next(c for c in rec.checks if c.name == "horizontality")
    v = hor.witness[0]
    assert v in F[3] and (N3.matrix @ v) not in F[2]


def test_pure_hs_deligne_is_hodge_decomposition():
    space, F = weight2_pure()
    N = NilpotentElement(space, Matrix.zeros(3, 3))
    rec = is_lmhs(F, N)
    assert rec.verdict
    dec = hodge_decomposition(F)
    for pq, S in dec.spaces.items():
        assert rec.splitting[pq] == S


def test_representative_flag_unavailable():
    with pytest.raises(InvalidInvariants):
        representative_flag((1,), {0: (0, 1)}, 0)  # a negative line cannot carry a weight-0 polarization


def _realizable(entries):
    out = []
    for e in entries:
        inv = e.label.invariants
        try:
            F = representative_flag(inv.m, inv.s_map, e.k)
        except InvalidInvariants:
            continue
        out.append((e, F))
    return out


def test_representative_flags_are_lmhs():
    count = 0
    for e, F in _realizable(catalog_upto(5)):
        inv = e.label.invariants
        _, N = construct_representative(inv.m, inv.s_map, e.k)
        rec = is_lmhs(F, N)
        assert rec.verdict, (inv, rec.failed())
        sp = rec.splitting
        assert sp.ok and sp.real_split()
        prim = primitive_splitting(sp, N)
        m = jordan_type(N)
        for ell in range(e.k + 1):
            assert sum(S.dim for (p, q), S in prim.items() if p + q == e.k + ell) == m[ell]
        count += 1
    assert count > 30


@settings(max_examples=15)
@given(st.integers(0, 10**6))
def test_lmhs_is_equivariant(seed):
    rng = random.Random(seed)
    pool = _realizable(e for e in catalog_upto(5) if e.dim >= 3)
    e, F = rng.choice(pool)
    inv = e.label.invariants
    space, N = construct_representative(inv.m, inv.s_map, e.k)
    g = random_group_element(space, rng)
    rec = is_lmhs(F.apply(g), N.conjugated(g))
    assert rec.verdict
    assert rec.splitting.ok


def test_non_real_split_lmhs():
    m, s, k = (0, 0, 1), {0: (0, 0), 2: (1, 0)}, 2
    space, N = construct_representative(m, s, k)
    F = representative_flag(m, s, k)
    G = orbit_point(F, N, I)
    rec = is_lmhs(G, N)
    assert rec.verdict
    sp = rec.splitting
    assert sp.ok and not sp.real_split()
    # the Deligne splitting moves with exp(iN)
    base = deligne_splitting(F, weight_filtration(N), N.matrix)
    from nilcone.sampling import exp_nilpotent

    g = exp_nilpotent(N.matrix, I)
    for pq, S in base.spaces.items():
        assert sp[pq] == S.map(g)


def test_nilpotent_orbit_spot_check(elliptic):
    space, N, F = elliptic
    for y in (1, 2, 5):
        assert in_period_domain(orbit_point(F, N, y * I), space)
    assert not in_period_domain(orbit_point(F, N, -I), space)


def test_deligne_reports_failures_on_bad_flag(elliptic):
    space, N, _ = elliptic
    F = HodgeFlag.from_vectors(1, {1: [[0, 1]]}, 2)  # F^1 = W_0
    sp = deligne_splitting(F, weight_filtration(N), N.matrix)
    assert not sp.ok
    assert not is_lmhs(F, N).verdict


def test_hermitian_form_on_piece():
    space, F = weight2_pure()
    u = F[2].basis[0]
    H = HermForm(Matrix([[-1 * bilinear(u, space.gram, [conj(x) for x in u])]]))
    assert real_part(H.gram.rows[0][0]) > 0
