import os
import random
from fractions import Fraction

import hypothesis
import pytest
from hypothesis import strategies as st

from nilcone.linalg import Matrix

hypothesis.settings.register_profile("default", deadline=None, max_examples=60, derandomize=True)
hypothesis.settings.register_profile("fast", deadline=None, max_examples=10, derandomize=True)
hypothesis.settings.register_profile("thorough", deadline=None, max_examples=400)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

small_ints = st.integers(min_value=-3, max_value=3)
fractions = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))


@st.composite
def matrices(draw, rows=None, cols=None, elements=small_ints, max_dim=5):
    r = rows if rows is not None else draw(st.integers(1, max_dim))
    c = cols if cols is not None else draw(st.integers(1, max_dim))
    data = draw(st.lists(st.lists(elements, min_size=c, max_size=c), min_size=r, max_size=r))
    return Matrix(data)


@st.composite
def symmetric_matrices(draw, n=None, elements=small_ints):
    n = n if n is not None else draw(st.integers(1, 5))
    upper = draw(st.lists(elements, min_size=n * (n + 1) // 2, max_size=n * (n + 1) // 2))
    M = [[0] * n for _ in range(n)]
    it = iter(upper)
    for i in range(n):
        for j in range(i, n):
            M[i][j] = M[j][i] = next(it)
    return Matrix(M)


@pytest.fixture
def rng():
    return random.Random(20240611)


_CATALOG = {}


def catalog_upto(dim_max):
    from nilcone.orbits import catalog

    if dim_max not in _CATALOG:
        _CATALOG[dim_max] = catalog(dim_max)
    return _CATALOG[dim_max]


def conjugated_representative(entry, seed):
    """Normal form of a catalog entry moved by a random exact element of G_R."""
    from nilcone.orbits import construct_representative
    from nilcone.sampling import random_conjugate

    inv = entry.label.invariants
    _, N = construct_representative(inv.m, inv.s_map, entry.k)
    return random_conjugate(N, random.Random(seed))


@st.composite
def random_nilpotents(draw, dim_max=6, min_dim=1):
    entries = [e for e in catalog_upto(dim_max) if e.dim >= min_dim]
    e = draw(st.sampled_from(entries))
    seed = draw(st.integers(0, 2**32 - 1))
    return e, conjugated_representative(e, seed)


# one line per acceptance criterion, filled in by test_acceptance.py
RESULTS = {}


def pytest_terminal_summary(terminalreporter):
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
