"""Shared test utilities: seeded random matrix generation."""

import random

from avcyclic import linalg


def random_unimodular(rng: random.Random, n: int, entry_bound: int = 5,
                      steps: int = 12) -> list[list[int]]:
    """Unimodular matrix built from elementary row operations, resampled
    until every entry stays within entry_bound."""
    while True:
        u = linalg.identity(n)
        for _ in range(steps):
            kind = rng.randrange(3)
            i = rng.randrange(n)
            j = rng.randrange(n)
            if kind == 0 and i != j:
                c = rng.choice([-2, -1, 1, 2])
                for k in range(n):
                    u[i][k] += c * u[j][k]
            elif kind == 1 and i != j:
                u[i], u[j] = u[j], u[i]
            elif kind == 2:
                u[i] = [-x for x in u[i]]
        if max(abs(x) for row in u for x in row) <= entry_bound:
            assert linalg.is_unimodular(u)
            return u


def random_int_matrix(rng: random.Random, n: int, bound: int = 9) -> list[list[int]]:
    return [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)]


def conjugate(m: list[list[int]], u: list[list[int]]) -> list[list[int]]:
    """u * m * u^-1 over the integers (u unimodular)."""
    return linalg.mat_mul(linalg.mat_mul(u, m), linalg.inverse_unimodular(u))
