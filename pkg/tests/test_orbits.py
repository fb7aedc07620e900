import json
from collections import Counter
from importlib import resources

import pytest
from hypothesis import given, settings

from conftest import catalog_upto, random_nilpotents
from nilcone.errors import InvalidInvariants
from nilcone.linalg import Matrix, signature
from nilcone.nilpotent import invariants
from nilcone.orbits import (
    ClassLabel,
    PosetRelation,
    catalog,
    classify,
    classify_complex,
    classify_real,
    closure_consistency,
    construct_representative,
    enumerate_invariants,
    order_dominance,
    order_paper,
    validate_invariants,
)

G, L, E, X = PosetRelation.GREATER, PosetRelation.LESS, PosetRelation.EQUAL, PosetRelation.INCOMPARABLE


# --------------------------------------------------------------------------
# signed Young diagrams: an independent count of real classes


def signed_young_counts(dim, k):
    """Counter keyed by the signature of Q (None for skew Q).

    Rows are (length, leading sign) with alternating signs along the row.
    Rows whose length has the paired parity (even for symmetric Q, odd for
    skew Q) occur in +/- pairs.
    """
    symmetric = k % 2 == 0
    rows = []
    for length in range(1, k + 2):
        paired = (length % 2 == 0) if symmetric else (length % 2 == 1)
        if paired:
            rows.append((length, "pair"))
        else:
            rows += [(length, "+"), (length, "-")]
    out = Counter()

    def boxes(row):
        return 2 * row[0] if row[1] == "pair" else row[0]

    def plus(row):
        length, s = row
        if s == "pair":
            return length
        return (length + 1) // 2 if s == "+" else length // 2

    def rec(i, remaining, p):
        if remaining == 0:
            out[(p, dim - p) if symmetric else None] += 1
            return
        if i == len(rows):
            return
        r = rows[i]
        for c in range(remaining // boxes(r) + 1):
            rec(i + 1, remaining - c * boxes(r), p + c * plus(r))

    rec(0, dim, 0)
    return out


def catalog_counts(entries):
    out = Counter()
    for e in entries:
        out[(e.dim, e.k, e.q_signature)] += 1
    return out


def test_signed_young_oracle_matches_catalog():
    cat = catalog_counts(catalog_upto(7))
    oracle = Counter()
    for dim in range(1, 8):
        for k in range(dim):
            for sig, c in signed_young_counts(dim, k).items():
                oracle[(dim, k, sig)] += c
    assert cat == oracle


def test_golden_counts_file():
    raw = json.loads((resources.files("nilcone") / "fixtures" / "catalog_counts.json").read_text())
    golden = Counter({(r["dim"], r["k"], tuple(r["q_signature"]) if r["q_signature"] else None): r["count"] for r in raw})
    oracle = Counter()
    for dim in range(1, 9):
        for k in range(dim):
            for sig, c in signed_young_counts(dim, k).items():
                oracle[(dim, k, sig)] += c
    assert golden == oracle


def test_catalog_dim2_odd():
    entries = catalog(2, "odd")
    got = sorted((tuple(e.label.invariants.m), e.label.invariants.to_json()["s"]["1"]) for e in entries)
    assert got == [((0, 1), [0, 1]), ((0, 1), [1, 0]), ((2, 0), [0, 0])]


# --------------------------------------------------------------------------
# validity


def test_validate_examples():
    assert validate_invariants((0, 1), {1: (1, 0)}, 1, 2)
    assert validate_invariants((2, 0), {1: (0, 0)}, 1, 2)
    for m in [(3, 0), (1, 1), (0, 0)]:
        assert not validate_invariants(m, {1: (0, 0)}, 1, 3)
    v = validate_invariants((1, 0), {1: (0, 0)}, 1, 1)
    assert not v and any("even" in p for p in v.problems)


def test_validate_signature_constraint():
    assert validate_invariants((2,), {0: (1, 1)}, 0, 2, q_signature=(1, 1))
    assert not validate_invariants((2,), {0: (2, 0)}, 0, 2, q_signature=(1, 1))
    assert not validate_invariants((0, 1), {1: (1, 0)}, 1, 2, q_signature=(1, 1))


def test_validate_s_levels_and_sums():
    assert not validate_invariants((1, 0, 1), {0: (1, 0)}, 2, 4)
    assert not validate_invariants((1, 0, 1), {0: (1, 0), 2: (0, 0)}, 2, 4)
    assert not validate_invariants((1, 0, 1), {0: (1, 0), 2: (1, 0), 1: (0, 0)}, 2, 4)


# --------------------------------------------------------------------------
# split-case truth tables


@pytest.mark.parametrize(
    "m, q_sign, split, case",
    [
        ((0, 2), 1, True, "Co(a)"),  # two size-2 strings, symmetric Q
        ((0, 2, 0, 2), 1, True, "Co(a)"),
        ((0, 1), -1, False, "Co(b)"),  # skew Q
        ((0, 2), -1, False, "Co(b)"),
        ((1,), 1, False, "Co(b)"),  # single odd block
        ((1, 2), 1, False, "Co(b)"),  # m_0 != 0
        ((0, 0, 1), 1, False, "Co(b)"),  # m_2 != 0
        ((0, 2, 0, 0), 1, True, "Co(a)"),
    ],
)
def test_classify_complex_table(m, q_sign, split, case):
    lab = classify_complex(m, q_sign)
    assert (lab.split, lab.case) == (split, case)
    assert lab.field == "complex"


def test_classify_complex_rejects_bad_parity():
    with pytest.raises(InvalidInvariants):
        classify_complex((0, 1), 1)  # a lone size-2 string for symmetric Q
    with pytest.raises(ValueError):
        classify_complex((2,), 0)


@pytest.mark.parametrize(
    "m, s, k, split, case",
    [
        # skew Q never splits
        ((0, 1), {1: (1, 0)}, 1, False, "skew"),
        ((2, 0), {1: (0, 0)}, 1, False, "skew"),
        # (a): every even-level m vanishes
        ((0, 2, 0), {0: (0, 0), 2: (0, 0)}, 2, True, "a"),
        ((0, 2, 0, 0, 0), {0: (0, 0), 2: (0, 0), 4: (0, 0)}, 4, True, "a"),
        # (b)(i): every live Q_l is (-1)^(l/2)-definite
        ((2,), {0: (2, 0)}, 0, True, "b(i)"),
        ((0, 0, 1), {0: (0, 0), 2: (0, 1)}, 2, True, "b(i)"),
        ((1, 0, 1), {0: (1, 0), 2: (0, 1)}, 2, True, "b(i)"),
        # (b)(ii): every live Q_l is (-1)^(l/2 + 1)-definite
        ((2,), {0: (0, 2)}, 0, True, "b(ii)"),
        ((0, 0, 1), {0: (0, 0), 2: (1, 0)}, 2, True, "b(ii)"),
        ((1, 2, 0), {0: (0, 1), 2: (0, 0)}, 2, True, "b(ii)"),
        # otherwise: mixed or indefinite
        ((2,), {0: (1, 1)}, 0, False, "otherwise"),
        ((1, 0, 1), {0: (1, 0), 2: (1, 0)}, 2, False, "otherwise"),
        ((0, 0, 2), {0: (0, 0), 2: (1, 1)}, 2, False, "otherwise"),
    ],
)
def test_classify_real_table(m, s, k, split, case):
    lab = classify_real(m, s, k)
    assert (lab.split, lab.case) == (split, case)
    assert lab.group == "identity_component"


def test_classify_real_rejects_invalid():
    with pytest.raises(InvalidInvariants):
        classify_real((1, 1), {1: (1, 0)}, 1)


@settings(max_examples=30)
@given(random_nilpotents(dim_max=6))
def test_split_depends_only_on_invariants(data):
    entry, N = data
    assert classify(N) == entry.label


def test_label_json_roundtrip():
    lab = classify_real((0, 1), {1: (1, 0)}, 1)
    assert lab.to_json() == {"m": [0, 1], "s": {"1": [1, 0]}, "field": "real", "group": "identity_component", "split": False, "case": "skew"}
    assert ClassLabel.from_json(lab.to_json()) == lab


# --------------------------------------------------------------------------
# representatives


def test_elliptic_representative():
    space, N = construct_representative((0, 1), {1: (1, 0)}, 1)
    assert space.gram == Matrix([[0, 1], [-1, 0]])
    assert N.matrix == Matrix([[0, 0], [1, 0]])


def test_zero_representative_is_diagonal():
    space, N = construct_representative((3,), {0: (2, 1)}, 0)
    assert space.gram == Matrix.diag([1, 1, -1])
    assert N.is_zero()


def test_representative_rejects_invalid():
    with pytest.raises(InvalidInvariants):
        construct_representative((1, 1), {1: (1, 0)}, 1)


def test_round_trip_small_catalog():
    for e in catalog_upto(6):
        inv = e.label.invariants
        space, N = construct_representative(inv.m, inv.s_map, e.k)
        assert invariants(N) == inv
        if e.q_signature is not None:
            assert signature(space.Q)[:2] == e.q_signature


def test_enumerate_invariants_dim4_k1():
    got = {(inv.m, inv.s_map[1]) for inv in enumerate_invariants(4, 1)}
    assert ((0, 2), (2, 0)) in got and ((0, 2), (1, 1)) in got and ((4, 0), (0, 0)) in got
    assert ((2, 1), (1, 0)) in got and ((2, 1), (0, 1)) in got
    assert len(got) == 6


# --------------------------------------------------------------------------
# partial orders


def test_dominance_chain():
    chain = [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    for a, b in zip(chain, chain[1:]):
        assert order_dominance(a, b) == G
        assert order_dominance(b, a) == L
    assert order_dominance((3, 1), (1, 3)) == E
    assert order_dominance((3, 3), (4, 1, 1)) == X


def test_literal_rule_on_regular_vs_subregular():
    # (4) as m = (0,0,0,1) and (3,1) as m = (1,0,1,0): partial sums over
    # i >= 1 are (0,0,1) and (0,1,1), so the literal rule puts (4) below (3,1)
    assert order_paper((0, 0, 0, 1), (1, 0, 1, 0)) == L
    assert order_paper((1, 0, 1, 0), (0, 2, 0, 0)) == L
    assert order_dominance((4,), (3, 1)) == G


def test_orders_reject_size_mismatch():
    with pytest.raises(InvalidInvariants):
        order_dominance((2,), (1,))
    with pytest.raises(InvalidInvariants):
        order_paper((0, 1), (1,))


def _is_partial_order(items, rel):
    for a in items:
        if rel(a, a) != E:
            return False
    for a in items:
        for b in items:
            r = rel(a, b)
            flip = {G: L, L: G, E: E, X: X}[r]
            if rel(b, a) != flip:
                return False
            if r == E and a != b:
                return False
    for a in items:
        for b in items:
            if rel(a, b) not in (G, E):
                continue
            for c in items:
                if rel(b, c) in (G, E) and rel(a, c) not in (G, E):
                    return False
    return True


def test_partial_orders_small():
    for dim in range(1, 7):
        ms = sorted({tuple(e.label.invariants.m) + (0,) * (dim - len(e.label.invariants.m)) for e in catalog_upto(6) if e.dim == dim})
        parts = sorted({tuple(sorted(p, reverse=True)) for p in (_partition(m) for m in ms)})
        assert _is_partial_order(ms, order_paper)
        assert _is_partial_order(parts, order_dominance)


def _partition(m):
    return tuple(l + 1 for l in range(len(m) - 1, -1, -1) for _ in range(m[l]))


def test_closure_consistency():
    a = classify_real((0, 2, 0), {0: (0, 0), 2: (0, 0)}, 2)
    assert not closure_consistency(a, a)  # equal m: neither closure contains the other
    b = classify_real((4, 0, 0), {0: (2, 2), 2: (0, 0)}, 2)
    assert closure_consistency(a, b) and closure_consistency(b, a)
    # partitions (3, 3) and (4, 1, 1) are incomparable
    c = classify_real((0, 0, 2, 0), {1: (0, 0), 3: (0, 0)}, 3)
    d = classify_real((2, 0, 0, 1), {1: (0, 0), 3: (1, 0)}, 3)
    assert not closure_consistency(c, d) and not closure_consistency(d, c)
