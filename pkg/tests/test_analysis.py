import pytest

from belitskii.analysis import (
    decompose,
    endomorphism_basis,
    is_indecomposable_by_links,
    is_indecomposable_by_local_ring,
    link_count,
    orbit_dimension,
    orbit_dimension_oracle,
    sigma_of_block,
)
from belitskii.linalg import Matrix, as_scalar
from belitskii.reduction import EDGE, EMPTY, WEYR, BlockLocation, ReducedBlock, SystemTriple, apply_group, canonicalize
from belitskii.sampling import random_group_element, random_system
from belitskii.weyr import EigenStructure


def triple(A, B, C, **dims):
    return SystemTriple.build(A, B, C, **dims)


LOC = BlockLocation("A", (0, 1), (0, 1))
EXAMPLE_121 = triple([[0, 1], [0, 0]], [[0], [1]], [[1, 5]])
ENTRY_111 = triple([[3]], [[1]], [[1]])
ENTRY_120 = triple([[2, 1], [0, 2]], [[0], [1]], [], l=0)


def zero_system(m, n, l):
    return SystemTriple(m, n, l, Matrix.zeros(n, n), Matrix.zeros(n, m), Matrix.zeros(l, n))


@pytest.mark.parametrize("block, sigma", [
    (ReducedBlock(EMPTY, 1, 1, 1, LOC), 1),
    (ReducedBlock(EDGE, 1, 1, 1, LOC, rank=1), 1),
    (ReducedBlock(WEYR, 2, 2, 2, LOC, structure=EigenStructure(((as_scalar(0), (2,)),))), 2),
    (ReducedBlock(WEYR, 1, 1, 0, LOC, structure=EigenStructure(((as_scalar(4), (1,)),))), 0),
    (ReducedBlock(EDGE, 2, 3, 4, LOC, rank=1), 4),
])
def test_sigma_of_block(block, sigma):
    assert sigma_of_block(block) == sigma


def test_orbit_dimension_examples():
    assert orbit_dimension(canonicalize(EXAMPLE_121)).dim_orbit == 5
    info = orbit_dimension(canonicalize(ENTRY_111))
    assert (info.dim_G, info.dim_orbit, info.dim_stabilizer) == (3, 2, 1)
    assert orbit_dimension(canonicalize(triple([[7]], [], [], m=0, l=0))).dim_orbit == 0


def test_oracle_examples():
    assert orbit_dimension_oracle(ENTRY_111) == 2
    assert orbit_dimension_oracle(EXAMPLE_121) == 5
    assert orbit_dimension_oracle(zero_system(1, 2, 1)) == 0


def test_endomorphism_examples():
    assert len(endomorphism_basis(ENTRY_111)) == 1
    assert len(endomorphism_basis(zero_system(1, 1, 1))) == 3
    two = ENTRY_111.direct_sum(triple([[4]], [[1]], [[1]]))
    assert len(endomorphism_basis(two)) == 2
    for X, Y, Z in endomorphism_basis(EXAMPLE_121):
        assert Y @ EXAMPLE_121.A == EXAMPLE_121.A @ Y


def test_local_ring_examples():
    assert is_indecomposable_by_local_ring(ENTRY_111)
    d110 = triple([[2]], [[1]], [], l=0)
    assert not is_indecomposable_by_local_ring(d110.direct_sum(d110))
    assert is_indecomposable_by_local_ring(ENTRY_120)
    assert not is_indecomposable_by_local_ring(zero_system(1, 1, 0))


def test_link_examples():
    assert link_count(canonicalize(ENTRY_111)) == 2
    assert link_count(canonicalize(ENTRY_120)) == 2
    scalar = canonicalize(triple([[2, 0], [0, 2]], [[1], [0]], [], l=0))
    assert link_count(scalar) == 1
    assert not is_indecomposable_by_links(scalar)


def test_criteria_agree_and_oracle_matches(rng):
    for _ in range(60):
        s = random_system(rng, 5)
        c = canonicalize(s)
        info = orbit_dimension(c)
        assert info.dim_orbit == orbit_dimension_oracle(s)
        assert info.dim_stabilizer == len(endomorphism_basis(s)) == c.final_stabilizer.dimension
        assert is_indecomposable_by_links(c) == is_indecomposable_by_local_ring(s)


def test_decompose_examples(rng):
    parts = decompose(ENTRY_111)
    assert [p.canonical for p in parts] == [ENTRY_111]

    parts = decompose(zero_system(1, 1, 1))
    assert sorted(p.canonical.d for p in parts) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]

    total = ENTRY_111.direct_sum(ENTRY_120)
    g = random_group_element(rng, *total.d)
    parts = decompose(apply_group(g, total))
    assert {p.canonical for p in parts} == {ENTRY_111, ENTRY_120}


def test_decompose_is_conjugation_invariant(rng):
    for _ in range(20):
        s = random_system(rng, 5)
        g = random_group_element(rng, *s.d)
        a = [p.canonical for p in decompose(s)]
        b = [p.canonical for p in decompose(apply_group(g, s))]
        assert a == b
        assert tuple(map(sum, zip(*(p.d for p in a)))) == s.d
        for p in decompose(s):
            assert is_indecomposable_by_links(p)
