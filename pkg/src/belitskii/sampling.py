"""Seeded random systems and group elements with split spectrum."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .linalg import ONE, ZERO, Matrix, Scalar, block_diag, invert, parse_scalar
from .reduction import GroupElement, SystemTriple

DEFAULT_POOL = tuple(parse_scalar(t) for t in ("0", "1", "-1", "2", "1/2", "i", "1+i", "-1/2+2i"))


def random_invertible(rng: random.Random, n: int, span: int = 2) -> Matrix:
    """Permuted product of unit lower and unit upper triangular integer matrices."""
    L = [[ONE if i == j else (Scalar(rng.randint(-span, span)) if j < i else ZERO) for j in range(n)] for i in range(n)]
    U = [[ONE if i == j else (Scalar(rng.randint(-span, span)) if j > i else ZERO) for j in range(n)] for i in range(n)]
    perm = list(range(n))
    rng.shuffle(perm)
    P = Matrix._wrap(n, n, tuple(ONE if perm[i] == j else ZERO for i in range(n) for j in range(n)))
    D = Matrix.diag([rng.choice((1, -1, 2, Fraction(1, 2))) for _ in range(n)])
    return P @ Matrix._from_lists(L, n) @ D @ Matrix._from_lists(U, n)


def random_group_element(rng: random.Random, m: int, n: int, l: int) -> GroupElement:
    return GroupElement(random_invertible(rng, m), random_invertible(rng, n), random_invertible(rng, l))


def jordan_matrix(blocks: Sequence[tuple[Scalar, int]]) -> Matrix:
    mats = []
    for lam, q in blocks:
        mats.append(Matrix._wrap(q, q, tuple(lam if i == j else (ONE if j == i + 1 else ZERO)
                                             for i in range(q) for j in range(q))))
    return block_diag(*mats) if mats else Matrix.zeros(0, 0)


def random_split_matrix(rng: random.Random, n: int, pool: Sequence[Scalar] = DEFAULT_POOL,
                        max_eigs: int = 4) -> Matrix:
    """A conjugate of a random Jordan matrix with eigenvalues drawn from ``pool``."""
    eigs = rng.sample(list(pool), min(max_eigs, len(pool)))
    eigs = eigs[:rng.randint(1, len(eigs))]
    blocks = []
    left = n
    while left:
        q = rng.randint(1, left)
        blocks.append((rng.choice(eigs), q))
        left -= q
    J = jordan_matrix(blocks)
    P = random_invertible(rng, n)
    return P @ J @ invert(P)


def _random_entries(rng: random.Random, rows: int, cols: int, zero_bias: float) -> Matrix:
    if rows and cols and rng.random() < 0.25:
        # rank-one pattern
        u = [rng.randint(-2, 2) for _ in range(rows)]
        v = [rng.randint(-2, 2) for _ in range(cols)]
        return Matrix(rows, cols, [u[i] * v[j] for i in range(rows) for j in range(cols)])
    return Matrix(rows, cols, [0 if rng.random() < zero_bias else rng.randint(-3, 3)
                               for _ in range(rows * cols)])


def random_dimension_vector(rng: random.Random, max_total: int, min_total: int = 1) -> tuple[int, int, int]:
    choices = [(m, n, l) for m in range(max_total + 1) for n in range(1, max_total + 1)
               for l in range(max_total + 1) if min_total <= m + n + l <= max_total]
    return rng.choice(choices)


def random_system(rng: random.Random, max_total: int = 4, d: tuple[int, int, int] | None = None,
                  pool: Sequence[Scalar] = DEFAULT_POOL, zero_bias: float = 0.4) -> SystemTriple:
    """Random triple with split spectrum, conjugated so nothing is in normal form already."""
    m, n, l = d if d is not None else random_dimension_vector(rng, max_total)
    A = random_split_matrix(rng, n, pool)
    B = _random_entries(rng, n, m, zero_bias)
    C = _random_entries(rng, l, n, zero_bias)
    return SystemTriple(m, n, l, A, B, C)
