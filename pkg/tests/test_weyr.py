import pytest

from belitskii.errors import EigenvaluesNotInField, NotAnEigenvalue
from belitskii.linalg import ONE, Matrix, as_scalar, commutant_map, invert, nullspace, parse_scalar
from belitskii.sampling import jordan_matrix, random_invertible, random_split_matrix
from belitskii.weyr import (
    EigenStructure,
    centralizer_dim,
    char_poly,
    conjugate_partition,
    eigen_structure,
    eigenvalues,
    jordan_partition,
    jordan_presentation,
    poly_eval_matrix,
    split_roots,
    weyr_characteristic,
    weyr_form,
)

from conftest import mat


def S(x):
    return as_scalar(x)


def coeffs(p):
    return [S(c) for c in p]


@pytest.mark.parametrize("A, poly", [
    (mat([[0, 1], [0, 0]]), [1, 0, 0]),
    (mat([[3]]), [1, -3]),
    (Matrix.diag([1, 2]), [1, -3, 2]),
    (mat([[0, -1], [1, 0]]), [1, 0, 1]),
])
def test_char_poly_examples(A, poly):
    assert char_poly(A) == coeffs(poly)


def test_eigenvalue_examples():
    assert eigenvalues(jordan_matrix([(S(5), 2)])) == [S(5), S(5)]
    assert eigenvalues(mat([[0, -1], [1, 0]])) == [S("-i"), S("i")]


def test_not_split_reports_residual():
    with pytest.raises(EigenvaluesNotInField) as info:
        eigenvalues(mat([[0, 1], [2, 0]]))
    assert info.value.residual == tuple(coeffs([1, 0, -2]))


def poly_mul(p, q):
    out = [S(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def from_roots(vals):
    p = [ONE]
    for v in vals:
        p = poly_mul(p, [ONE, -S(v)])
    return p


def test_split_roots_mixed():
    p = poly_mul(from_roots(["1/2", "1/2", "1+i"]), coeffs([1, 0, -3]))
    roots, residual = split_roots(p)
    assert roots == [(S("1/2"), 2), (S("1+i"), 1)]
    assert residual == coeffs([1, 0, -3])


def test_split_roots_gaussian_rationals():
    roots, residual = split_roots(from_roots(["-1/2+2i", "1/3", "1/3", "-i", "0"]))
    assert residual == [ONE]
    assert dict(roots) == {S("-1/2+2i"): 1, S("1/3"): 2, S("-i"): 1, S(0): 1}


@pytest.mark.parametrize("A, part", [
    (jordan_matrix([(S(0), 2)]), (2,)),
    (Matrix.zeros(3, 3), (1, 1, 1)),
    (jordan_matrix([(S(0), 2), (S(0), 1)]), (2, 1)),
])
def test_jordan_partition_examples(A, part):
    assert jordan_partition(A, 0) == part
    assert weyr_characteristic(A, S(0)) == conjugate_partition(part)


def test_jordan_partition_rejects_non_eigenvalue():
    with pytest.raises(NotAnEigenvalue):
        jordan_partition(Matrix.identity(2), 0)


def test_conjugate_partition():
    assert conjugate_partition((3, 1)) == (2, 1, 1)
    assert conjugate_partition((2, 2, 1)) == (3, 2)
    assert conjugate_partition(()) == ()


def test_weyr_of_jordan_block_is_itself():
    J = jordan_matrix([(S(4), 2)])
    w, Y = weyr_form(J)
    assert w.W == J
    assert Y @ J @ invert(Y) == J


def test_weyr_distinct_eigenvalues():
    A = mat([[1, 1], [0, 2]])
    w, Y = weyr_form(A)
    assert w.W == Matrix.diag([1, 2])
    assert Y @ A @ invert(Y) == w.W


def test_weyr_partition_2_1():
    A = jordan_matrix([(S(0), 2), (S(0), 1)])
    w, Y = weyr_form(A)
    assert w.W == mat([[0, 0, 1], [0, 0, 0], [0, 0, 0]])
    assert w.strip_sizes == ((2, 1),)
    assert Y @ A @ invert(Y) == w.W


@pytest.mark.parametrize("structure, dim", [
    (EigenStructure(((S(0), (2,)),)), 2),
    (EigenStructure(((S(0), (1, 1)),)), 4),
    (EigenStructure(((S(0), (1,)), (S(1), (1,)))), 2),
])
def test_centralizer_dim_examples(structure, dim):
    assert centralizer_dim(structure) == dim


def test_jordan_presentation_examples():
    J2 = jordan_matrix([(S(3), 2)])
    P, J = jordan_presentation(weyr_form(J2)[0])
    assert P == Matrix.identity(2) and J == J2

    P, J = jordan_presentation(weyr_form(Matrix.diag([0, 1]))[0])
    assert P == Matrix.identity(2)

    w, _ = weyr_form(jordan_matrix([(S(0), 2), (S(0), 1)]))
    P, J = jordan_presentation(w)
    assert P @ w.W @ P.T == jordan_matrix([(S(0), 2), (S(0), 1)])


def test_weyr_form_is_invariant_under_similarity(rng):
    pool = [S(x) for x in ("0", "1", "i", "-1/2+2i")]
    for _ in range(30):
        n = rng.randint(1, 5)
        A = random_split_matrix(rng, n, pool)
        P = random_invertible(rng, n)
        w1, Y1 = weyr_form(A)
        w2, _ = weyr_form(P @ A @ invert(P))
        assert w1.W == w2.W
        assert Y1 @ A @ invert(Y1) == w1.W
        assert eigen_structure(A) == w1.structure


def test_larger_weyr_shape():
    # partition (3,1) -> Weyr strips (2,1,1)
    A = jordan_matrix([(S(2), 3), (S(2), 1)])
    w, Y = weyr_form(A)
    assert w.strip_sizes == ((2, 1, 1),)
    assert Y @ A @ invert(Y) == w.W
    # (2j-1) q_j summed: 1*3 + 3*1
    assert len(nullspace(commutant_map(A))) == centralizer_dim(w.structure) == 6


def test_cayley_hamilton_example():
    A = mat([["1/2", "i"], [3, "-1+i"]])
    assert poly_eval_matrix(char_poly(A), A).is_zero()
    assert parse_scalar("1") == char_poly(A)[0]
