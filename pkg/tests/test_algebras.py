import random

import pytest

from commutant.algebras import (
    MatrixAlgebra,
    centralizer,
    centralizer_dimension,
    conjugate_algebra,
    is_trivial_centralizer,
    peirce_split,
    transpose_algebra,
)
from commutant.fields import QQ, GF
from commutant.matrices import (
    Matrix,
    elementary,
    identity,
    jordan_nilpotent,
    random_invertible,
    random_matrix,
    zeros,
)


def embed_block(field, n, block, row0, col0):
    grid = [[field.zero()] * n for _ in range(n)]
    for i, row in enumerate(block.data):
        for j, v in enumerate(row):
            grid[row0 + i][col0 + j] = v
    return Matrix(field, grid)


def upper_triangular_basis(field, n):
    return [elementary(field, n, i, j) for i in range(n) for j in range(i, n)]


def five_dim_even_generators(field, p):
    """diag blocks plus the three-dimensional corner {I, J, J^t} at size 2p."""
    n = 2 * p
    ip = identity(field, p)
    j = jordan_nilpotent(field, p)
    return [
        embed_block(field, n, ip, 0, 0),
        embed_block(field, n, ip, p, p),
        embed_block(field, n, ip, 0, p),
        embed_block(field, n, j, 0, p),
        embed_block(field, n, j.transpose(), 0, p),
    ]


def four_dim_odd_generators(field, p):
    n = 2 * p + 1
    cp = Matrix(field, [[1 if i == j else 0 for j in range(p + 1)] for i in range(p)])
    dp = Matrix(field, [[1 if i + 1 == j else 0 for j in range(p + 1)] for i in range(p)])
    return [
        embed_block(field, n, identity(field, p), 0, 0),
        embed_block(field, n, identity(field, p + 1), p, p),
        embed_block(field, n, cp, 0, p),
        embed_block(field, n, dp, 0, p),
    ]


def test_closure_trivial():
    a = MatrixAlgebra.trivial(QQ, 3)
    assert a.dim == 1
    assert a.basis[0] == identity(QQ, 3)


def test_closure_five_dim_family_already_closed():
    a = MatrixAlgebra.closure(five_dim_even_generators(QQ, 2))
    assert a.n == 4 and a.dim == 5


def test_closure_of_jordan_block():
    j = jordan_nilpotent(GF(5), 3)
    a = MatrixAlgebra.closure([j])
    assert a.dim == 3
    assert a.contains(j * j)
    assert a.contains(identity(GF(5), 3))


def test_closure_full_matrix_algebra():
    rng = random.Random(2)
    mats = [random_matrix(GF(3), 3, 3, rng) for _ in range(2)]
    a = MatrixAlgebra.closure(mats)
    assert a.dim == 9  # two random matrices generate everything


def test_closure_cap():
    rng = random.Random(2)
    mats = [random_matrix(GF(3), 3, 3, rng) for _ in range(2)]
    assert MatrixAlgebra.closure(mats, dim_cap=4) is None


def test_closure_rejects_mixed_inputs():
    with pytest.raises(Exception):
        MatrixAlgebra.closure([identity(QQ, 2), identity(GF(3), 2)])
    with pytest.raises(ValueError):
        MatrixAlgebra.closure([identity(QQ, 2), identity(QQ, 3)])


def test_from_basis_verifies():
    field = QQ
    with pytest.raises(ValueError):
        MatrixAlgebra.from_basis([jordan_nilpotent(field, 2)])  # no identity
    with pytest.raises(ValueError):
        MatrixAlgebra.from_basis(
            [identity(field, 2), elementary(field, 2, 0, 1), elementary(field, 2, 1, 0)]
        )  # E12 * E21 = E11 escapes the span


def test_centralizer_of_triangular_algebra_is_scalar():
    basis = upper_triangular_basis(QQ, 3)
    c = centralizer(basis)
    assert c.dim == 1
    assert c.basis[0] == identity(QQ, 3)


def test_centralizer_of_jordan_is_its_polynomials():
    for field in (QQ, GF(3)):
        for n in (2, 3, 4, 5):
            c = centralizer([jordan_nilpotent(field, n)])
            assert c.dim == n
            assert c == MatrixAlgebra.closure([jordan_nilpotent(field, n)])


def test_centralizer_jordan_pair_trivial():
    j = jordan_nilpotent(QQ, 4)
    c = centralizer([j, j.transpose()])
    assert c.dim == 1


def test_centralizer_dimension_matches():
    rng = random.Random(9)
    for field in (QQ, GF(5)):
        for _ in range(30):
            mats = [random_matrix(field, 3, 3, rng) for _ in range(2)]
            assert centralizer_dimension(mats) == centralizer(mats).dim


def test_centralizer_of_algebra_equals_centralizer_of_generators():
    rng = random.Random(10)
    for _ in range(30):
        gens = [random_matrix(GF(3), 3, 3, rng)]
        a = MatrixAlgebra.closure(gens)
        assert centralizer(gens) == centralizer(a.basis)


def test_is_trivial_centralizer_examples():
    t2 = MatrixAlgebra.from_basis(upper_triangular_basis(QQ, 2))
    assert is_trivial_centralizer(t2)
    assert not is_trivial_centralizer(MatrixAlgebra.trivial(QQ, 3))
    h3 = MatrixAlgebra.closure(four_dim_odd_generators(QQ, 1))
    assert h3.dim == 4
    assert is_trivial_centralizer(h3)


def test_conjugate_and_transpose_preserve_structure():
    rng = random.Random(11)
    field = GF(5)
    a = MatrixAlgebra.closure(five_dim_even_generators(field, 2))
    assert conjugate_algebra(a, identity(field, 4)) == a
    for _ in range(20):
        p = random_invertible(field, 4, rng)
        b = conjugate_algebra(a, p)
        assert b.dim == a.dim
        assert centralizer_dimension(b.basis) == centralizer_dimension(a.basis)
    at = transpose_algebra(a)
    assert at.dim == a.dim
    with pytest.raises(ValueError):
        conjugate_algebra(a, zeros(field, 4, 4))


def test_conjugation_preserves_triviality_odd_family():
    rng = random.Random(12)
    field = GF(7)
    h5 = MatrixAlgebra.closure(four_dim_odd_generators(field, 2))
    assert is_trivial_centralizer(h5)
    for _ in range(10):
        p = random_invertible(field, 5, rng)
        assert is_trivial_centralizer(conjugate_algebra(h5, p))


def test_peirce_split_odd_family():
    h3 = MatrixAlgebra.closure(four_dim_odd_generators(QQ, 1))
    e = Matrix(QQ, [[1, 0, 0], [0, 0, 0], [0, 0, 0]])
    dec = peirce_split(h3, e)
    assert (dec.p, dec.q) == (1, 2)
    assert dec.nu == (1, 2, 0, 1)


def test_peirce_split_even_family():
    f4 = MatrixAlgebra.closure(five_dim_even_generators(QQ, 2))
    e = Matrix(QQ, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]])
    dec = peirce_split(f4, e)
    assert dec.nu == (1, 3, 0, 1)
    assert sum(dec.nu) == f4.dim


def test_peirce_split_scalar_plus_idempotent():
    field = GF(5)
    e = Matrix(field, [[1, 0, 0], [0, 1, 0], [0, 0, 0]])
    a = MatrixAlgebra.closure([e])
    dec = peirce_split(a, e)
    assert dec.nu == (1, 0, 0, 1)


def test_peirce_split_conjugated_idempotent():
    rng = random.Random(13)
    field = GF(7)
    h5 = MatrixAlgebra.closure(four_dim_odd_generators(field, 2))
    p = random_invertible(field, 5, rng)
    conj = conjugate_algebra(h5, p)
    e0 = embed_block(field, 5, identity(field, 2), 0, 0)
    from commutant.matrices import inverse

    e = p * e0 * inverse(p)
    dec = peirce_split(conj, e)
    assert dec.nu == (1, 2, 0, 1)
    assert sum(dec.nu) == 4
    # conjugator brings the idempotent to the block form
    s = dec.conjugator
    d = inverse(s) * e * s
    expected = embed_block(field, 5, identity(field, 2), 0, 0)
    assert d == expected


def test_peirce_rejects_bad_idempotents():
    h3 = MatrixAlgebra.closure(four_dim_odd_generators(QQ, 1))
    with pytest.raises(ValueError):
        peirce_split(h3, identity(QQ, 3))
    with pytest.raises(ValueError):
        peirce_split(h3, zeros(QQ, 3, 3))
    with pytest.raises(ValueError):
        peirce_split(h3, Matrix(QQ, [[0, 1, 0], [0, 0, 0], [0, 0, 0]]))  # not idempotent
    e_outside = Matrix(QQ, [[0, 0, 0], [0, 1, 0], [0, 0, 0]])
    with pytest.raises(ValueError):
        peirce_split(h3, e_outside)
