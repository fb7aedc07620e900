import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nilcone.cone import (
    ELLIPTIC,
    WEIGHT2_PAIR,
    WEIGHT2_STRING,
    WEIGHT3_LONG,
    ConeRunConfig,
    NilpotentCone,
    adversarial_cones,
    fixture_cones,
    grid_points,
    independent_generators,
    run_cone,
    sample_cone,
    single_cone,
    sum_cone,
    validate_cone,
    verify_ck,
    verify_theorem1,
    vertex_points,
)
from nilcone.errors import DimensionMismatch, NilconeError
from nilcone.hodge import HodgeFlag
from nilcone.linalg import Matrix
from nilcone.nilpotent import FormSpace, NilpotentElement, weight_filtration


@pytest.fixture(scope="module")
def fixtures():
    return fixture_cones()


# --------------------------------------------------------------------------
# sampling


def test_grid_depth_two():
    assert set(grid_points(2, 2)) == {(1, 1), (2, 1), (1, 2)}
    assert grid_points(1, 3) == [(1,), (2,), (3,)]
    assert len(grid_points(3, 1)) == 1


def test_vertex_points():
    pts = vertex_points(2)
    assert pts[0] == (1, 1)
    assert pts[1] == (1, Fraction(1, 100)) and pts[2] == (Fraction(1, 100), 1)
    assert vertex_points(1) == [(1,)]


def test_sample_count_one_is_barycenter():
    cone = sum_cone(ELLIPTIC, ELLIPTIC)
    assert sample_cone(cone, 1) == [(1, 1)]


@settings(max_examples=30)
@given(st.integers(1, 60), st.integers(0, 10**6))
def test_random_samples_are_positive_and_seeded(count, seed):
    cone = sum_cone(ELLIPTIC, ELLIPTIC)
    pts = sample_cone(cone, count, "random", seed)
    assert len(pts) == count == len(set(pts))
    assert all(x > 0 for t in pts for x in t)
    assert pts == sample_cone(cone, count, "random", seed)


def test_random_samples_widen_on_one_ray():
    pts = sample_cone(single_cone(ELLIPTIC), 120, seed=0)
    assert len(set(pts)) == 120
    assert max(max(x.numerator, x.denominator) for t in pts for x in t) > 9


def test_sampling_rejects_bad_arguments():
    cone = single_cone(ELLIPTIC)
    with pytest.raises(ValueError):
        sample_cone(cone, 0)
    with pytest.raises(ValueError):
        sample_cone(cone, 3, "sobol")


def test_run_config_points_are_distinct():
    cone = sum_cone(ELLIPTIC, ELLIPTIC)
    pts = ConeRunConfig(samples=100, grid_depth=4).points(cone)
    assert len(pts) == len(set(pts))
    assert set(grid_points(2, 4)) <= set(pts)
    assert len(pts) >= 100


# --------------------------------------------------------------------------
# cone construction and validation


def test_cone_validation_errors():
    cone = single_cone(ELLIPTIC)
    with pytest.raises(NilconeError):
        NilpotentCone(cone.space, [])
    other = FormSpace.from_gram([[0, 1], [-1, 0]], 3)
    with pytest.raises(DimensionMismatch):
        NilpotentCone(cone.space, [NilpotentElement(other, cone.generators[0].matrix)])
    with pytest.raises(DimensionMismatch):
        cone.point((1, 2))


def test_cone_json_roundtrip(fixtures):
    for cone in fixtures[:4]:
        again = NilpotentCone.from_json(json.loads(json.dumps(cone.to_json())))
        assert again.to_json() == cone.to_json()


def test_fixtures_validate(fixtures):
    assert len(fixtures) >= 10
    assert sum(independent_generators(c) for c in fixtures if c.m >= 2) >= 3
    for cone in fixtures:
        diag = validate_cone(cone)
        assert diag.valid, (cone.name, [c.to_json() for c in diag.checks if not c])


def test_commutation_failure_has_witness():
    space = FormSpace.from_gram(Matrix([[0, 0, 1], [0, -1, 0], [1, 0, 0]]), 2)
    # two non-commuting nilpotents in so(Q)
    A = NilpotentElement(space, Matrix([[0, 1, 0], [0, 0, 1], [0, 0, 0]]))
    B = NilpotentElement(space, Matrix([[0, 0, 0], [1, 0, 0], [0, 1, 0]]))
    diag = validate_cone(NilpotentCone(space, [A, B]))
    assert not diag.valid
    bad = [c for c in diag.checks if not c]
    assert bad[0].name == "commutation" and "entry" in bad[0].detail


def test_horizontality_failure_detected():
    cone = single_cone(WEIGHT3_LONG)
    N3 = NilpotentElement(cone.space, cone.generators[0].power(3))
    diag = validate_cone(NilpotentCone(cone.space, [N3], cone.flag))
    hor = next(c for c in diag.checks if c.name == "horizontality")
    assert not hor and hor.witness


def test_generator_lmhs_is_informational():
    cone = sum_cone(ELLIPTIC, ELLIPTIC)
    diag = validate_cone(cone)
    assert diag.valid
    # N_A ⊕ 0 alone does not polarize the second block
    assert any(not c for c in diag.info)


def test_wrong_flag_fails_validation():
    cone = single_cone(ELLIPTIC)
    F = HodgeFlag.from_vectors(1, {1: [[0, 1]]}, 2)
    diag = validate_cone(NilpotentCone(cone.space, cone.generators, F))
    assert not diag.valid
    assert any(c.name == "lmhs" and not c for c in diag.checks)


# --------------------------------------------------------------------------
# constancy


def test_ck_on_fixtures(fixtures):
    for cone in fixtures:
        pts = ConeRunConfig(samples=30, grid_depth=3).points(cone)
        res = verify_ck(cone, pts)
        assert res.equal, (cone.name, res.witness)
        assert res.W_dims == weight_filtration(cone.barycenter()).dims()


def test_ck_witness_on_adversarial():
    for cone in adversarial_cones():
        pts = ConeRunConfig(samples=20, grid_depth=3).points(cone)
        res = verify_ck(cone, pts)
        assert not res
        w = res.witness
        assert w["dims"][0] != w["dims"][1]
        t = [Fraction(x) for x in w["t"]]
        tp = [Fraction(x) for x in w["t_prime"]]
        lvl = w["level"]
        assert weight_filtration(cone.point(t))[lvl].dim == w["dims"][0]
        assert weight_filtration(cone.point(tp))[lvl].dim == w["dims"][1]


def test_congruence_elliptic():
    rep = verify_theorem1(single_cone(ELLIPTIC), sample_cone(single_cone(ELLIPTIC), 50, seed=3))
    assert rep.verdict
    assert rep.invariants[0].m == (0, 1) and rep.invariants[0].s_map == {1: (1, 0)}
    assert rep.label["case"] == "skew" and not rep.label["split"]


def test_congruence_split_note():
    cone = sum_cone(WEIGHT2_STRING, WEIGHT2_PAIR, "independent")
    rep = run_cone(cone, ConeRunConfig(samples=10, grid_depth=2))
    assert rep.verdict and rep.diagnostics["valid"]
    assert bool(rep.split_note) == rep.label["split"]


def test_congruence_witness_on_adversarial():
    for cone in adversarial_cones():
        rep = run_cone(cone, ConeRunConfig(samples=20, grid_depth=3))
        assert not rep.verdict
        assert rep.witness["invariants"] != rep.witness["invariants_prime"]


def test_report_is_deterministic():
    cone = fixture_cones()[9]
    cfg = ConeRunConfig(samples=15, grid_depth=2, seed=7)
    a = json.dumps(run_cone(cone, cfg).to_json(), sort_keys=True)
    b = json.dumps(run_cone(cone, cfg).to_json(), sort_keys=True)
    assert a == b
    doc = json.loads(a)
    assert doc["config"] == {"samples": 15, "grid_depth": 2, "seed": 7}
    assert doc["schema_version"] == 1


def test_workers_agree():
    cone = sum_cone(ELLIPTIC, ELLIPTIC)
    pts = sample_cone(cone, 8, seed=1)
    serial = verify_theorem1(cone, pts).to_json()
    parallel = verify_theorem1(cone, pts, workers=2).to_json()
    assert serial == parallel


@settings(max_examples=20)
@given(st.integers(1, 9), st.integers(1, 9), st.integers(1, 9), st.integers(1, 9))
def test_scaling_preserves_filtration(a, b, c, d):
    cone = sum_cone(WEIGHT2_STRING, WEIGHT2_PAIR, "independent")
    t = (Fraction(a, b), Fraction(c, d))
    assert weight_filtration(cone.point(t)) == weight_filtration(cone.point((2 * t[0], 2 * t[1])))
