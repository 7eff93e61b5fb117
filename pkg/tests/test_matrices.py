import random

import pytest

from commutant.errors import FieldMismatchError
from commutant.fields import QQ, GF
from commutant.matrices import (
    Matrix,
    RowSpan,
    devectorize,
    elementary,
    identity,
    inverse,
    is_invertible,
    jordan_nilpotent,
    kernel_basis,
    minimal_polynomial,
    poly_at_matrix,
    random_invertible,
    random_matrix,
    rank,
    rref,
    solve_right,
    vectorize,
    zeros,
)
from commutant.polys import Poly

FIELDS = [QQ, GF(3), GF(5), GF(2, 2)]


def test_construction_and_equality():
    m = Matrix(QQ, [[1, 2], [3, 4]])
    assert m.shape == (2, 2)
    assert m == Matrix(QQ, [[1, 2], [3, 4]])
    assert m != Matrix(QQ, [[1, 2], [3, 5]])
    with pytest.raises(ValueError):
        Matrix(QQ, [[1, 2], [3]])
    with pytest.raises(FieldMismatchError):
        m + Matrix(GF(5), [[1, 2], [3, 4]])


def test_mul_and_transpose():
    a = Matrix(GF(7), [[1, 2], [3, 4]])
    b = Matrix(GF(7), [[5, 6], [0, 1]])
    assert a * b == Matrix(GF(7), [[5, 8 % 7], [15 % 7, 22 % 7]])
    assert a.transpose() == Matrix(GF(7), [[1, 3], [2, 4]])
    assert (a * b).transpose() == b.transpose() * a.transpose()


def test_jordan_shape():
    j = jordan_nilpotent(QQ, 3)
    assert j == Matrix(QQ, [[0, 1, 0], [0, 0, 1], [0, 0, 0]])
    assert (j * j * j).is_zero()


def test_rref_identity_and_zero():
    i3 = identity(QQ, 3)
    r, pivots, t = rref(i3)
    assert r == i3 and pivots == [0, 1, 2] and t == i3
    z = zeros(GF(5), 2, 3)
    r, pivots, t = rref(z)
    assert r == z and pivots == []


def test_rref_jordan():
    j = jordan_nilpotent(QQ, 3)
    r, pivots, t = rref(j)
    # pivots sit in the second and third columns
    assert pivots == [1, 2]
    assert rank(j) == 2
    assert t * j == r


def test_rref_idempotent_and_transform():
    rng = random.Random(11)
    for field in FIELDS:
        for _ in range(100):
            m = random_matrix(field, rng.randrange(1, 5), rng.randrange(1, 5), rng)
            r, pivots, t = rref(m)
            assert t * m == r
            r2, p2, _ = rref(r)
            assert r2 == r and p2 == pivots


def test_rank_transpose_random():
    rng = random.Random(13)
    for field in FIELDS:
        n_checks = 250
        for _ in range(n_checks):
            m = random_matrix(field, rng.randrange(1, 5), rng.randrange(1, 5), rng)
            assert rank(m) == rank(m.transpose())


def test_kernel_examples():
    assert kernel_basis(identity(QQ, 3)) == []
    z = zeros(GF(3), 2, 3)
    ker = kernel_basis(z)
    assert len(ker) == 3
    # C_2 = [I_2 0] has kernel spanned by the third standard basis vector
    c2 = Matrix(QQ, [[1, 0, 0], [0, 1, 0]])
    ker = kernel_basis(c2)
    assert len(ker) == 1
    assert ker[0] == Matrix(QQ, [[0], [0], [1]])


def test_kernel_vectors_annihilate():
    rng = random.Random(17)
    for field in FIELDS:
        for _ in range(100):
            m = random_matrix(field, rng.randrange(1, 5), rng.randrange(1, 6), rng)
            ker = kernel_basis(m)
            assert len(ker) == m.cols - rank(m)
            for v in ker:
                assert (m * v).is_zero()


def test_solve_right():
    i2 = identity(QQ, 2)
    b = Matrix(QQ, [[3], [4]])
    assert solve_right(i2, b) == b
    assert solve_right(zeros(QQ, 2, 2), b) is None
    rng = random.Random(23)
    field = GF(7)
    for _ in range(200):
        a = random_matrix(field, 3, 4, rng)
        x0 = random_matrix(field, 4, 2, rng)
        b = a * x0
        x = solve_right(a, b)
        assert x is not None
        assert a * x == b


def test_inverse():
    rng = random.Random(29)
    for field in FIELDS:
        for _ in range(50):
            m = random_invertible(field, 3, rng)
            mi = inverse(m)
            assert m * mi == identity(field, 3)
            assert mi * m == identity(field, 3)
    with pytest.raises(ValueError):
        inverse(zeros(QQ, 2, 2))
    assert not is_invertible(zeros(QQ, 2, 2))


def test_vectorize_round_trip():
    rng = random.Random(31)
    m = random_matrix(GF(5), 3, 4, rng)
    v = vectorize(m)
    assert v.shape == (12, 1)
    assert devectorize(v, 3, 4) == m
    e12 = elementary(QQ, 2, 0, 1)
    assert vectorize(e12) == Matrix(QQ, [[0], [1], [0], [0]])
    j2 = jordan_nilpotent(QQ, 2)
    assert devectorize(vectorize(j2), 2, 2) == j2
    with pytest.raises(ValueError):
        devectorize(v, 2, 5)


def test_minimal_polynomial_examples():
    for n in (2, 3, 4):
        j = jordan_nilpotent(QQ, n)
        assert minimal_polynomial(j) == Poly.monomial(QQ, n)
    d = Matrix(QQ, [[1, 0, 0], [0, 1, 0], [0, 0, 0]])
    assert minimal_polynomial(d) == Poly(QQ, [0, -1, 1])  # x^2 - x
    n = Matrix(QQ, [[0, 1, 0], [0, 0, 0], [0, 0, 0]])
    assert minimal_polynomial(n) == Poly(QQ, [0, 0, 1])  # x^2
    s = identity(GF(7), 3).scale(4)
    assert minimal_polynomial(s) == Poly(GF(7), [-4, 1])


def test_minimal_polynomial_annihilates_and_bounds():
    rng = random.Random(37)
    for field in FIELDS:
        for _ in range(100):
            m = random_matrix(field, 4, 4, rng)
            mu = minimal_polynomial(m)
            assert mu.is_monic()
            assert mu.degree <= 4
            assert poly_at_matrix(mu, m).is_zero()


def test_minimal_polynomial_conjugation_invariant():
    rng = random.Random(41)
    for field in [QQ, GF(5)]:
        for _ in range(50):
            m = random_matrix(field, 4, 4, rng)
            p = random_invertible(field, 4, rng)
            conj = p * m * inverse(p)
            assert minimal_polynomial(conj) == minimal_polynomial(m)


def test_row_span_canonical():
    span = RowSpan(GF(5), 4)
    assert span.insert([0, 1, 2, 3])
    assert span.insert([1, 1, 1, 1])
    assert not span.insert([1, 2, 3, 4])  # sum of the first two
    assert span.dim == 2
    # canonical basis equals the RREF of the generators in any order
    other = RowSpan(GF(5), 4)
    other.insert([1, 2, 3, 4])
    other.insert([0, 1, 2, 3])
    assert span.basis_rows() == other.basis_rows()
    assert span.contains([2, 3, 4, 0])
    assert not span.contains([1, 0, 0, 0])
