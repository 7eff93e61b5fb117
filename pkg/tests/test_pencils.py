import random
from fractions import Fraction

import pytest

from commutant.errors import PencilRankError
from commutant.fields import QQ, GF
from commutant.matrices import (
    Matrix,
    identity,
    inverse,
    random_invertible,
    rank,
    zeros,
)
from commutant.pencils import (
    Pencil,
    canonical_pencil,
    forbidden_block_detect,
    is_fullrank_pencil,
    kronecker_reduce,
    left_identity_block,
    minimal_kernel_vector,
    pencil_minors_gcd,
    poly_matrix_det,
    right_identity_block,
)
from commutant.polys import Poly


def equivalent_canonical(field, n, rng):
    """(P0 C Q0^-1, P0 D Q0^-1) for random invertible P0, Q0."""
    base = canonical_pencil(field, n)
    p0 = random_invertible(field, n, rng)
    q0 = random_invertible(field, n + 1, rng)
    q0i = inverse(q0)
    return Pencil(p0 * base.a * q0i, p0 * base.b * q0i), p0, q0


def test_pencil_validation():
    with pytest.raises(ValueError):
        Pencil(identity(QQ, 2), identity(QQ, 2))
    with pytest.raises(ValueError):
        Pencil(left_identity_block(QQ, 2), left_identity_block(QQ, 3))


def test_poly_matrix_det_matches_scalar_case():
    rng = random.Random(3)
    for field in (QQ, GF(5)):
        for n in (1, 2, 3, 4):
            for _ in range(20):
                grid = [
                    [Poly.constant(field, field.random_value(rng)) for _ in range(n)]
                    for _ in range(n)
                ]
                det = poly_matrix_det(grid)
                # compare against elimination-based rank/inverse arithmetic:
                # determinant is zero iff the scalar matrix is singular
                m = Matrix(field, [[g.coeffs[0] if g.coeffs else field.zero() for g in row] for row in grid])
                assert det.is_zero() == (rank(m) < n)


def test_poly_matrix_det_known():
    x = Poly.x(QQ)
    one = Poly.one(QQ)
    grid = [[x, one], [one, x]]
    assert poly_matrix_det(grid) == x * x - one


def test_canonical_pencil_is_fullrank():
    for field in (QQ, GF(2), GF(5)):
        for n in (1, 2, 3, 4):
            assert is_fullrank_pencil(canonical_pencil(field, n))


def test_repeated_member_pencil_rejected_with_root():
    c2 = left_identity_block(QQ, 2)
    pc = Pencil(c2, c2)
    assert not is_fullrank_pencil(pc)
    diag = forbidden_block_detect(pc)
    assert diag.kind == "finite-eigenvalue"
    assert diag.finite_root == Fraction(-1)


def test_mixed_rank_pencil_rejected_at_infinity():
    a = Matrix(QQ, [[1, 0, 0], [0, 1, 0]])
    b = Matrix(QQ, [[0, 0, 0], [0, 0, 1]])
    pc = Pencil(a, b)
    assert not is_fullrank_pencil(pc)
    diag = forbidden_block_detect(pc)
    assert "infinity" in diag.witnesses
    assert diag.b_rank == 1


def test_regular_part_diagnostic():
    # block-diag(1 + x, L_1): 2 x 3 pencil with a size-1 regular part
    a = Matrix(QQ, [[1, 0, 0], [0, 1, 0]])
    b = Matrix(QQ, [[1, 0, 0], [0, 0, 1]])
    pc = Pencil(a, b)
    assert not is_fullrank_pencil(pc)
    diag = forbidden_block_detect(pc)
    assert diag.finite_root == Fraction(-1)
    assert "short-minimal-index" in diag.witnesses
    assert diag.minimal_index == 1
    assert diag.regular_part_size == 1


def test_diagnose_rejects_fullrank_input():
    with pytest.raises(ValueError):
        forbidden_block_detect(canonical_pencil(QQ, 2))


def test_minimal_index_of_canonical_pencil():
    for n in (1, 2, 3, 4):
        d, coeffs = minimal_kernel_vector(canonical_pencil(QQ, n))
        assert d == n
        assert len(coeffs) == n + 1


def test_reduce_canonical_gives_identities():
    for field in (QQ, GF(5)):
        for n in (1, 2, 3):
            red = kronecker_reduce(canonical_pencil(field, n))
            assert red.p_left == identity(field, n)
            assert red.q_right == identity(field, n + 1)


def test_reduce_round_trip_random():
    rng = random.Random(17)
    for field in (QQ, GF(5), GF(7)):
        for n in range(1, 6):
            for _ in range(12):
                pc, _, _ = equivalent_canonical(field, n, rng)
                red = kronecker_reduce(pc)
                p, q = red.p_left, red.q_right
                qi = inverse(q)
                assert pc.a == p * left_identity_block(field, n) * qi
                assert pc.b == p * right_identity_block(field, n) * qi


def test_reduce_rejects_degenerate():
    c2 = left_identity_block(QQ, 2)
    with pytest.raises(PencilRankError):
        kronecker_reduce(Pencil(c2, c2))


def test_fullrank_invariant_under_equivalence():
    rng = random.Random(23)
    field = GF(5)
    n = 3
    base = canonical_pencil(field, n)
    for _ in range(25):
        p0 = random_invertible(field, n, rng)
        q0 = random_invertible(field, n + 1, rng)
        q0i = inverse(q0)
        pc = Pencil(p0 * base.a * q0i, p0 * base.b * q0i)
        assert is_fullrank_pencil(pc)
        # swapping the members composes with the coordinate flip, which
        # preserves the property
        assert is_fullrank_pencil(Pencil(pc.b, pc.a))


def test_fullrank_fails_for_constant_gcd_trick():
    # A + 0B full rank but the combination (0, 1) drops rank
    a = Matrix(QQ, [[1, 0, 0], [0, 1, 0]])
    b = Matrix(QQ, [[0, 0, 0], [0, 0, 1]])
    assert rank(a) == 2
    assert not is_fullrank_pencil(Pencil(a, b))


def test_minors_gcd_zero_for_identically_singular():
    z = zeros(QQ, 2, 3)
    pc = Pencil(z, z)
    assert pencil_minors_gcd(pc).is_zero()
    diag = forbidden_block_detect(pc)
    assert diag.kind == "identically-singular"
