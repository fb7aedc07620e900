"""Random exact elements of g = End(V, Q) and G = Aut(V, Q).

Group elements come from the Cayley transform (I - X)^(-1) (I + X) of a
random X in g, or from exp of a nilpotent X (a polynomial, so exact).
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import factorial

from nilcone.linalg import Matrix, inverse
from nilcone.nilpotent import FormSpace, NilpotentElement
from nilcone.scalars import to_scalar


def random_algebra_element(space: FormSpace, rng: random.Random, bound: int = 2) -> Matrix:
    """X = Q^(-1) A with A^T = -sign(Q) A, which is exactly X^T Q + Q X = 0."""
    n = space.dim
    eps = space.Q.sign
    A = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            if i == j:
                if eps == -1:  # A symmetric
                    A[i][i] = Fraction(rng.randint(-bound, bound))
                continue
            x = Fraction(rng.randint(-bound, bound))
            A[i][j] = x
            A[j][i] = -eps * x
    return inverse(space.gram) @ Matrix(A)


def cayley(X: Matrix) -> Matrix | None:
    n = X.nrows
    Id = Matrix.identity(n)
    try:
        return inverse(Id - X) @ (Id + X)
    except ZeroDivisionError:
        return None


def exp_nilpotent(X: Matrix, t=1) -> Matrix:
    """exp(tX) for nilpotent X; t may be a Gaussian rational."""
    n = X.nrows
    t = to_scalar(t)
    out = Matrix.identity(n)
    term = Matrix.identity(n)
    for j in range(1, n + 1):
        term = term @ X
        if term.is_zero():
            break
        out = out + term.scale(t**j / factorial(j))
    return out


def random_group_element(space: FormSpace, rng: random.Random, bound: int = 1) -> Matrix:
    while True:
        g = cayley(random_algebra_element(space, rng, bound))
        if g is not None:
            assert space.preserves(g)
            return g


def random_conjugate(N: NilpotentElement, rng: random.Random, bound: int = 1) -> NilpotentElement:
    return N.conjugated(random_group_element(N.space, rng, bound))


def conjugate_space(space: FormSpace, h: Matrix) -> tuple[FormSpace, Matrix]:
    """Change of basis v -> h v; returns the new space and h^(-1) for moving maps.

    A map X on the old coordinates becomes h X h^(-1); the form becomes
    h^(-T) Q h^(-1).
    """
    hinv = inverse(h)
    return FormSpace.from_gram(hinv.T @ space.gram @ hinv, space.k), hinv
