"""Shared random generators for the test suite (deterministic via seeds)."""

from __future__ import annotations

import random
from fractions import Fraction

from lmhs.exactlin import ExactMatrix, GaussianScalar, Subspace, rank


def random_partition(rng: random.Random, n: int) -> list[int]:
    """A random partition of n (Jordan block sizes)."""
    parts = []
    left = n
    while left:
        p = rng.randrange(1, left + 1)
        parts.append(p)
        left -= p
    parts.sort(reverse=True)
    return parts


def jordan_nilpotent(block_sizes: list[int]) -> ExactMatrix:
    """Nilpotent matrix with the given Jordan block sizes.

    Columns convention: within a block with basis u, Nu, ..., N^(s-1)u the
    matrix sends basis vector j to basis vector j+1.
    """
    n = sum(block_sizes)
    rows = [[0] * n for _ in range(n)]
    offset = 0
    for s in block_sizes:
        for j in range(s - 1):
            rows[offset + j + 1][offset + j] = 1
        offset += s
    return ExactMatrix.from_rational(rows)


def random_invertible(rng: random.Random, n: int, spread: int = 3) -> ExactMatrix:
    while True:
        M = ExactMatrix.from_rational(
            [[rng.randrange(-spread, spread + 1) for _ in range(n)] for _ in range(n)]
        )
        if rank(M) == n:
            return M


def random_unimodular(rng: random.Random, n: int) -> ExactMatrix:
    """Random integer matrix of determinant +-1 (a product of shears), so
    the inverse is integral and entries stay small."""
    rows = [[Fraction(int(j == k)) for k in range(n)] for j in range(n)]
    for _ in range(2 * n):
        i = rng.randrange(n)
        j = rng.randrange(n)
        if i == j:
            continue
        c = rng.choice([-2, -1, 1, 2])
        rows[i] = [a + c * b for a, b in zip(rows[i], rows[j])]
    if rng.random() < 0.5 and n:
        rows[0] = [-a for a in rows[0]]
    return ExactMatrix.from_rational(rows)


def invert(M: ExactMatrix) -> ExactMatrix:
    from lmhs.exactlin import rref

    n = M.rows
    R, _, rk = rref(M.hstack(ExactMatrix.identity(n)))
    assert rk == n, "matrix is not invertible"
    return ExactMatrix([[R.entries[j][n + k] for k in range(n)] for j in range(n)])


def random_nilpotent(rng: random.Random, max_dim: int) -> ExactMatrix:
    """A random nilpotent matrix: random Jordan type, random rational basis."""
    n = rng.randrange(1, max_dim + 1)
    J = jordan_nilpotent(random_partition(rng, n))
    T = random_unimodular(rng, n)
    return T @ J @ invert(T)
