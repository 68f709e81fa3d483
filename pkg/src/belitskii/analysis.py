"""Orbit dimensions, indecomposability tests and direct-sum decomposition."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ReductionError
from .linalg import ONE, ZERO, Matrix, Scalar, _nullspace_rows, _rank_rows, _rref_inplace, format_scalar
from .reduction import (
    EDGE,
    WEYR,
    CanonicalSystem,
    ReducedBlock,
    SystemTriple,
    _canonicalize,
    block_sigma,
    canonicalize,
)


@dataclass(frozen=True)
class OrbitInfo:
    dim_G: int
    dim_orbit: int
    dim_stabilizer: int
    dim_system_space: int


def sigma_of_block(b: ReducedBlock) -> int:
    return block_sigma(b.kind, b.rows, b.cols, r=b.rank, structure=b.structure)


def group_dimension(d: tuple[int, int, int]) -> int:
    m, n, l = d
    return m * m + n * n + l * l


def orbit_dimension(c: CanonicalSystem) -> OrbitInfo:
    """Sum of the block contributions; cross-checked against the tracked stabilizer."""
    s = c.canonical
    dim_G = group_dimension(s.d)
    dim_orbit = sum(sigma_of_block(b) for b in c.trace)
    dim_stab = dim_G - dim_orbit
    if dim_stab != c.final_stabilizer.dimension:
        raise ReductionError(
            f"orbit dimension {dim_orbit} disagrees with stabilizer dimension {c.final_stabilizer.dimension}")
    return OrbitInfo(dim_G, dim_orbit, dim_stab, s.m * s.n + s.n * s.n + s.l * s.n)


# ---------------------------------------------------------------------------
# tangent map and endomorphisms
# ---------------------------------------------------------------------------


def tangent_map(s: SystemTriple) -> Matrix:
    """Matrix of (X, Y, Z) -> (YA - AY, YB - BX, ZC - CY) in row-major coordinates.

    Columns are vec(X) | vec(Y) | vec(Z); rows are vec(YA-AY) | vec(YB-BX) | vec(ZC-CY).
    """
    m, n, l = s.d
    oy, oz = m * m, m * m + n * n
    N = oz + l * l
    A, B, C = s.A, s.B, s.C
    rows = []
    for i in range(n):
        for j in range(n):
            row = [ZERO] * N
            for k in range(n):
                if A[k, j]:
                    row[oy + i * n + k] += A[k, j]
                if A[i, k]:
                    row[oy + k * n + j] -= A[i, k]
            rows.append(row)
    for i in range(n):
        for j in range(m):
            row = [ZERO] * N
            for k in range(n):
                if B[k, j]:
                    row[oy + i * n + k] += B[k, j]
            for k in range(m):
                if B[i, k]:
                    row[k * m + j] -= B[i, k]
            rows.append(row)
    for i in range(l):
        for j in range(n):
            row = [ZERO] * N
            for k in range(l):
                if C[k, j]:
                    row[oz + i * l + k] += C[k, j]
            for k in range(n):
                if C[i, k]:
                    row[oy + k * n + j] -= C[i, k]
            rows.append(row)
    return Matrix._from_lists(rows, N)


def orbit_dimension_oracle(s: SystemTriple) -> int:
    """Rank of the tangent map of the group action at ``s``; needs no spectral data."""
    T = tangent_map(s)
    return _rank_rows(T.to_lists(), T.cols) if T.rows else 0


def endomorphism_basis(s: SystemTriple) -> list[tuple[Matrix, Matrix, Matrix]]:
    """Basis of {(X, Y, Z) : YA = AY, YB = BX, ZC = CY}, in rref order."""
    T = tangent_map(s)
    N = T.cols
    vecs = _nullspace_rows(T.to_lists(), N) if T.rows else [
        [ONE if i == j else ZERO for j in range(N)] for i in range(N)]
    _rref_inplace(vecs, N)
    m, n, l = s.d
    oy, oz = m * m, m * m + n * n
    return [(Matrix(m, m, v[:oy]), Matrix(n, n, v[oy:oz]), Matrix(l, l, v[oz:])) for v in vecs]


def _flat(t: tuple[Matrix, Matrix, Matrix]) -> list[Scalar]:
    return list(t[0].entries) + list(t[1].entries) + list(t[2].entries)


def radical_dimension(basis: list[tuple[Matrix, Matrix, Matrix]]) -> int:
    """Dimension of the Jacobson radical: the kernel of (a, b) -> tr(L_ab) (characteristic zero)."""
    k = len(basis)
    if k == 0:
        return 0
    vecs = [_flat(t) for t in basis]
    pivots = []
    for v in vecs:
        pivots.append(next(i for i, x in enumerate(v) if x))
    # structure constants: e_a e_b = sum_t c[a][b][t] e_t, read off at rref pivots
    consts = []
    for a in basis:
        row = []
        for b in basis:
            prod = _flat((a[0] @ b[0], a[1] @ b[1], a[2] @ b[2]))
            row.append([prod[p] for p in pivots])
        consts.append(row)
    tau = [sum((consts[c][b][b] for b in range(k)), ZERO) for c in range(k)]
    form = [[sum((consts[a][b][t] * tau[t] for t in range(k) if consts[a][b][t]), ZERO)
             for b in range(k)] for a in range(k)]
    return len(_nullspace_rows(form, k))


def is_indecomposable_by_local_ring(s: SystemTriple) -> bool:
    basis = endomorphism_basis(s)
    return len(basis) - radical_dimension(basis) == 1


def link_count(c: CanonicalSystem) -> int:
    """Units created by edge reductions plus Weyr superdiagonal units."""
    total = 0
    for b in c.trace:
        if b.kind == EDGE:
            total += b.rank
        elif b.kind == WEYR:
            total += sum(q - 1 for _, part in b.structure.eigenvalues for q in part)
    return total


def is_indecomposable_by_links(c: CanonicalSystem) -> bool:
    return link_count(c) == c.canonical.total_dim - 1


# ---------------------------------------------------------------------------
# decomposition
# ---------------------------------------------------------------------------


def _components(s: SystemTriple) -> list[tuple[list[int], list[int], list[int]]]:
    m, n, l = s.d
    parent = list(range(m + n + l))  # X: 0..m-1, Y: m..m+n-1, Z: m+n..

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    for i in range(n):
        for j in range(n):
            if s.A[i, j]:
                union(m + i, m + j)
        for j in range(m):
            if s.B[i, j]:
                union(m + i, j)
    for i in range(l):
        for j in range(n):
            if s.C[i, j]:
                union(m + n + i, m + j)
    groups: dict[int, tuple[list[int], list[int], list[int]]] = {}
    for v in range(m + n + l):
        xs, ys, zs = groups.setdefault(find(v), ([], [], []))
        if v < m:
            xs.append(v)
        elif v < m + n:
            ys.append(v - m)
        else:
            zs.append(v - m - n)
    return list(groups.values())


def canonical_sort_key(c: CanonicalSystem):
    s = c.canonical
    return (s.d, tuple(format_scalar(x) for M in (s.A, s.B, s.C) for x in M.entries))


def decompose(s: SystemTriple) -> tuple[CanonicalSystem, ...]:
    """Indecomposable summands of ``s``, each canonicalized, in a fixed sort order.

    The summands are the connected components of the canonical form, where two
    basis vectors are adjacent when a nonzero canonical entry couples them.
    """
    c = canonicalize(s)
    parts = []
    for xs, ys, zs in _components(c.canonical):
        parts.append(_canonicalize(c.canonical.restrict(xs, ys, zs)))
    return tuple(sorted(parts, key=canonical_sort_key))
