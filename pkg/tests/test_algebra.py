import itertools

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from crossalg.algebra import (
    FDAlgebra,
    IdempotentSetError,
    NotAnIdeal,
    NotAssociative,
    NotIdempotent,
    NotInvertible,
    NotPrimitive,
    NotSplit,
    NotUnital,
    automorphism_witness,
    center,
    characterize_local_commutative,
    corner_algebra,
    field_algebra,
    gabriel_quiver,
    matrix_algebra,
    matrix_order,
    minimal_polynomial,
    product_algebra,
    quotient_algebra,
    radical,
    radical_certificate,
    split_structure,
    truncated_polynomial_algebra,
    try_inverse,
    validate_idempotent_set,
)
from crossalg.crossed import ParameterSet, build_crossed_product
from crossalg.fixtures import polynomial_quotient_algebra, tensor_algebra
from crossalg.group import cyclic_group
from crossalg.linalg import GF, QQ, Subspace


def group_algebra(p, n):
    return build_crossed_product(ParameterSet.trivial(field_algebra(GF(p)), cyclic_group(n))).algebra


def upper_triangular(F, n):
    """Upper triangular n x n matrices with basis E_ij (i <= j)."""
    idx = [(i, j) for i in range(n) for j in range(i, n)]
    pos = {e: k for k, e in enumerate(idx)}
    d = len(idx)
    table = F.zeros((d, d, d))
    for (i, j), a in pos.items():
        for (k, l), b in pos.items():
            if j == k:
                table[a, b, pos[(i, l)]] = 1
    one = F.zeros(d)
    for i in range(n):
        one[pos[(i, i)]] = 1
    return FDAlgebra(F, table, one, idempotents=[np.eye(d, dtype=np.int64)[pos[(i, i)]] for i in range(n)])


def elements(A):
    return [np.array(v, dtype=np.int64) for v in itertools.product(range(A.field.p), repeat=A.dim)]


def brute_radical(A):
    """``{a : b a nilpotent for every b}`` by enumeration."""
    els = elements(A)
    out = []
    for a in els:
        if all(not A.power(A.mul(b, a), A.dim + 1).any() for b in els):
            out.append(a)
    return out


def brute_center(A):
    return [a for a in elements(A) if all(np.array_equal(A.mul(a, b), A.mul(b, a)) for b in elements(A))]


SMALL = {
    "dual_gf2": lambda: truncated_polynomial_algebra(GF(2), 2),
    "cubic_gf3": lambda: truncated_polynomial_algebra(GF(3), 3),
    "upper2_gf2": lambda: upper_triangular(GF(2), 2),
    "group_c2_gf2": lambda: group_algebra(2, 2),
    "group_c4_gf2": lambda: group_algebra(2, 4),
    "matrix2_gf2": lambda: matrix_algebra(GF(2), 2),
    "product_gf2": lambda: product_algebra(truncated_polynomial_algebra(GF(2), 2), field_algebra(GF(2))),
}


@pytest.mark.parametrize("name", sorted(SMALL))
def test_radical_matches_enumeration(name):
    A = SMALL[name]()
    J = radical(A)
    brute = brute_radical(A)
    assert A.field.p ** J.dim == len(brute)
    assert all(J.contains(a) for a in brute)
    assert radical_certificate(A).ok


@pytest.mark.parametrize("name", sorted(SMALL))
def test_center_matches_enumeration(name):
    A = SMALL[name]()
    Z = center(A)
    brute = brute_center(A)
    assert A.field.p ** Z.dim == len(brute)
    assert all(Z.contains(a) for a in brute)


@pytest.mark.parametrize("p,n,rad", [(2, 2, 1), (2, 4, 3), (3, 3, 2), (3, 6, 4), (5, 2, 0), (2, 6, 3)])
def test_group_algebra_radical_dimension(p, n, rad):
    # for n = p^a m with p not dividing m the radical has dimension n - m
    assert radical(group_algebra(p, n)).dim == rad


def test_radical_char_zero():
    A = upper_triangular(QQ, 3)
    assert radical(A).dim == 3
    assert radical(matrix_algebra(QQ, 2)).dim == 0
    assert characterize_local_commutative(truncated_polynomial_algebra(QQ, 3)).radical_layers == (1, 1, 1)


def test_corrupted_table_reports_triple():
    A = truncated_polynomial_algebra(GF(3), 3)
    T = A.table.copy()
    T[1, 2, 2] = 1  # X * X^2 = X^2 instead of 0
    with pytest.raises(NotAssociative) as exc:
        FDAlgebra(GF(3), T, A.one)
    i, j, k = exc.value.witness
    F = GF(3)
    B = FDAlgebra(F, T, A.one, check=False)
    lhs = B.mul(B.mul(B.basis_vector(i), B.basis_vector(j)), B.basis_vector(k))
    rhs = B.mul(B.basis_vector(i), B.mul(B.basis_vector(j), B.basis_vector(k)))
    assert not np.array_equal(lhs, rhs)


def test_not_unital():
    A = truncated_polynomial_algebra(GF(2), 2)
    with pytest.raises(NotUnital):
        FDAlgebra(GF(2), A.table, [0, 1])


def test_structure_constant_round_trip():
    A = upper_triangular(GF(5), 2)
    B = FDAlgebra.from_structure_constants(GF(5), A.dim, A.structure_constants(), A.one)
    assert A.same_as(B)
    with pytest.raises(IndexError):
        FDAlgebra.from_structure_constants(GF(5), 2, [(0, 0, 3, 1)], [1, 0])


@given(st.sampled_from([2, 3, 5]), st.integers(2, 4), st.integers(0, 10**6))
def test_inverse_of_units(p, n, seed):
    A = truncated_polynomial_algebra(GF(p), n)
    rng = np.random.default_rng(seed)
    a = A.field.random_array(rng, (n,))
    if a[0] == 0:
        with pytest.raises(NotInvertible):
            try_inverse(A, a)
    else:
        b = try_inverse(A, a)
        assert np.array_equal(A.mul(a, b), A.one) and np.array_equal(A.mul(b, a), A.one)


@given(st.integers(0, 10**6))
def test_minimal_polynomial_matches_sympy(seed):
    F = GF(5)
    A = matrix_algebra(F, 3)
    rng = np.random.default_rng(seed)
    a = F.random_array(rng, (9,))
    coeffs = minimal_polynomial(A, a)
    X = sympy.Symbol("X")
    M = sympy.Matrix(3, 3, [int(v) for v in a])
    charpoly = sympy.Poly(M.charpoly(X).as_expr(), X, modulus=5)
    mine = sympy.Poly(sum(int(c) * X**k for k, c in enumerate(coeffs)), X, modulus=5)
    assert charpoly.rem(mine).is_zero
    assert mine.LC() == 1
    # the value at a is zero
    val = A.field.zeros(9)
    power = A.one
    for c in coeffs:
        val = A.field.reduce(val + int(c) * power)
        power = A.mul(power, a)
    assert not val.any()


def test_quotient_and_corner():
    F = GF(2)
    A = upper_triangular(F, 2)
    q = quotient_algebra(A, radical(A))
    assert q.algebra.dim == 2 and q.algebra.is_commutative()
    e = A.basis_vector(0)  # E_00
    c = corner_algebra(A, e)
    assert c.algebra.dim == 1
    with pytest.raises(NotIdempotent):
        corner_algebra(A, A.basis_vector(1))
    with pytest.raises(NotAnIdeal):
        quotient_algebra(A, Subspace.span(F, 3, [A.basis_vector(0)]))


def test_split_structure_classes():
    F = GF(3)
    A = matrix_algebra(F, 2)
    sp = split_structure(A)
    assert len(sp.idempotents) == 2 and len(sp.classes) == 1
    U = upper_triangular(F, 3)
    assert len(split_structure(U).classes) == 3
    assert gabriel_quiver(U).sum() == 2


def test_non_split_field_extension():
    K = polynomial_quotient_algebra(GF(2), [1, 1])  # GF(4)
    with pytest.raises(NotSplit):
        split_structure(K)
    with pytest.raises(NotSplit):
        split_structure(group_algebra(2, 3))


def test_idempotent_set_errors():
    F = GF(2)
    A = matrix_algebra(F, 2)
    with pytest.raises(NotPrimitive):
        validate_idempotent_set(A, [A.one])
    with pytest.raises(IdempotentSetError):
        validate_idempotent_set(A, [A.basis_vector(0)])


def test_profiles():
    prof = characterize_local_commutative(truncated_polynomial_algebra(GF(2), 2))
    assert (prof.dim, prof.commutative, prof.local, prof.radical_layers) == (2, True, True, (1, 1))
    prof = characterize_local_commutative(upper_triangular(GF(2), 2))
    assert not prof.commutative and not prof.local


def test_tensor_algebra_dimension():
    A = tensor_algebra(truncated_polynomial_algebra(GF(3), 2), truncated_polynomial_algebra(GF(3), 3))
    assert A.dim == 6 and radical(A).dim == 5


def test_automorphisms():
    F = GF(3)
    A = truncated_polynomial_algebra(F, 3)
    good = F.asarray([[1, 0, 0], [0, 2, 0], [0, 0, 1]])  # X -> -X
    assert automorphism_witness(A, good) is None
    assert matrix_order(good, F) == 2
    bad = F.asarray([[1, 0, 0], [0, 2, 0], [0, 0, 2]])
    assert automorphism_witness(A, bad)[0] == "multiplicative"
    assert automorphism_witness(A, F.zeros((3, 3)))[0] == "unit"
