import random
from fractions import Fraction

import pytest

from commutant.fields import QQ, GF
from commutant.polys import (
    Poly,
    factor_finite_field,
    poly_gcd,
    poly_gcd_bezout,
    rational_linear_quadratic_split,
    rational_roots,
    squarefree_decomposition,
    squarefree_radical,
)


def P(field, *coeffs):
    return Poly(field, coeffs)


def random_poly(field, rng, max_deg, monic=False):
    d = rng.randrange(max_deg + 1)
    coeffs = [field.random_value(rng) for _ in range(d + 1)]
    if monic:
        coeffs[-1] = field.one()
    return Poly(field, coeffs)


def test_basic_arithmetic():
    f = P(QQ, 1, 2, 1)  # (x+1)^2
    g = P(QQ, 1, 1)
    assert g * g == f
    assert f - f == Poly.zero(QQ)
    assert (f + g).degree == 2
    assert f.degree == 2
    assert Poly.zero(QQ).degree is None
    q, r = divmod(f, g)
    assert q == g and r.is_zero()


def test_divmod_random():
    rng = random.Random(1)
    for field in [QQ, GF(5), GF(2, 2)]:
        for _ in range(200):
            a = random_poly(field, rng, 6)
            b = random_poly(field, rng, 3)
            if b.is_zero():
                continue
            q, r = divmod(a, b)
            assert q * b + r == a
            assert r.is_zero() or r.degree < b.degree


def test_gcd_bezout_linear_coprime():
    # f = x - 1, g = x
    f = P(QQ, -1, 1)
    g = P(QQ, 0, 1)
    d, u, v = poly_gcd_bezout(f, g)
    assert d.is_one()
    assert u == P(QQ, -1)
    assert v == P(QQ, 1)


def test_gcd_bezout_divisibility_case():
    # f = x^2, g = x
    f = P(QQ, 0, 0, 1)
    g = P(QQ, 0, 1)
    d, u, v = poly_gcd_bezout(f, g)
    assert d == g
    assert u.is_zero()
    assert v.is_one()


def test_gcd_bezout_random_identity():
    rng = random.Random(77)
    field = GF(7)
    for _ in range(1000):
        f = random_poly(field, rng, 6, monic=True)
        g = random_poly(field, rng, 6, monic=True)
        d, u, v = poly_gcd_bezout(f, g)
        assert u * f + v * g == d
        assert d.is_monic()
        assert d.divides(f) and d.divides(g)
        if not (f % g).is_zero() and d.degree is not None and g.degree is not None:
            assert u.is_zero() or u.degree < g.degree - d.degree


def test_gcd_bezout_rejects_two_zeros():
    with pytest.raises(ValueError):
        poly_gcd_bezout(Poly.zero(QQ), Poly.zero(QQ))


def test_radical_cubes_and_mixed():
    x = Poly.x(QQ)
    one = Poly.one(QQ)
    f = (x - one) ** 3
    assert squarefree_radical(f) == x - one
    g = x * x * (x - one)
    assert squarefree_radical(g) == x * (x - one)


def test_radical_char_p_multiplicity_p():
    # (x+1)^3 over GF(3) has zero gcd route through the derivative
    field = GF(3)
    x = Poly.x(field)
    one = Poly.one(field)
    f = (x + one) ** 3
    assert f.derivative().is_zero()
    assert squarefree_radical(f) == x + one
    g = (x + one) ** 6 * x
    assert squarefree_radical(g) == (x + one) * x


def test_radical_matches_factorization_multiset():
    rng = random.Random(5)
    field = GF(5)
    for _ in range(200):
        g = random_poly(field, rng, 3, monic=True)
        h = random_poly(field, rng, 3, monic=True)
        if g.is_constant() or h.is_constant():
            continue
        if not poly_gcd(g, h).is_constant():
            continue
        f = g * g * h
        rad = squarefree_radical(f)
        expected = Poly.one(field)
        for pi, _ in factor_finite_field(f):
            expected = expected * pi
        assert rad == expected
        # the radical divides f and is squarefree
        assert rad.divides(f)
        assert poly_gcd(rad, rad.derivative()).is_constant() or rad.derivative().is_zero()


def test_factor_x2_plus_1():
    f2 = GF(2)
    f = P(f2, 1, 0, 1)
    assert factor_finite_field(f) == [(P(f2, 1, 1), 2)]
    f5 = GF(5)
    g = P(f5, 1, 0, 1)
    assert factor_finite_field(g) == [(P(f5, 2, 1), 1), (P(f5, 3, 1), 1)]


def test_factor_round_trip_random():
    rng = random.Random(3)
    for field in [GF(3), GF(2), GF(2, 2)]:
        for _ in range(150):
            f = random_poly(field, rng, 8, monic=True)
            if f.is_constant():
                continue
            factors = factor_finite_field(f)
            prod = Poly.one(field)
            for pi, e in factors:
                assert pi.is_monic()
                prod = prod * pi**e
            assert prod == f
            # deterministic ordering: degree then coefficient sequence
            degs = [pi.degree for pi, _ in factors]
            assert degs == sorted(degs)


def test_factor_rejects_rationals():
    with pytest.raises(ValueError):
        factor_finite_field(P(QQ, 1, 0, 1))


def test_yun_decomposition():
    x = Poly.x(QQ)
    one = Poly.one(QQ)
    f = (x - one) ** 3 * (x + one) * x**2
    parts = squarefree_decomposition(f)
    rebuilt = Poly.one(QQ)
    for g, i in parts:
        rebuilt = rebuilt * g**i
    assert rebuilt == f
    assert sorted(i for _, i in parts) == [1, 2, 3]


def test_rational_roots():
    x = Poly.x(QQ)
    f = (x - P(QQ, 2)) * (x + P(QQ, Fraction(1, 3))) * (x - P(QQ, 2))
    assert rational_roots(f) == [Fraction(-1, 3), Fraction(2)]


def test_rational_split_examples():
    x = Poly.x(QQ)
    f = P(QQ, 2, -3, 1)  # x^2 - 3x + 2
    out = rational_linear_quadratic_split(f)
    assert out is not None
    g, h = out
    assert {g, h} == {x - P(QQ, 1), x - P(QQ, 2)}

    assert rational_linear_quadratic_split(P(QQ, 1, 0, 1)) is None  # x^2 + 1

    f = (x - P(QQ, 2)) ** 2 * (x + P(QQ, 1))
    out = rational_linear_quadratic_split(f)
    assert out is not None
    g, h = out
    assert poly_gcd(g, h).is_constant()
    assert (g * h).divides(f) or (f % (g * h)).is_zero()
    assert not g.is_constant() and not h.is_constant()


def test_rational_split_pure_power_absent():
    x = Poly.x(QQ)
    f = (x - P(QQ, 2)) ** 3
    assert rational_linear_quadratic_split(f) is None
