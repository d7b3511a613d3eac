import galois
import pytest
from asserts import assert_equal, assert_raises, assert_true

from gzl.exception import NonInvertibleLeadingCoefficient
from gzl.fieldutils import FqConfig
from gzl.rand import generator, random_unit
from gzl.scalarutils import Tower
from gzl.skewutils import SkewPoly, gcrd, skew_ops

F = galois.GF(9)
Q = 3


def poly(coeffs):
    return SkewPoly([F(c) for c in coeffs], Q)


def random_poly(rng, degree):
    coeffs = [int(c) for c in rng.integers(0, 9, size=degree)] + [int(rng.integers(1, 9))]
    return poly(coeffs)


@pytest.fixture
def rng():
    return generator(5)


def test_tau_twists_constants():
    tau = poly([0, 1])
    for a in range(1, 9):
        assert_equal(tau * poly([a]), SkewPoly([F(0), F(a) ** 3], Q))
    assert_true(any(tau * poly([a]) != poly([a]) * tau for a in range(1, 9)))


def test_multiplication_is_associative(rng):
    for _ in range(10):
        u, v, w = (random_poly(rng, int(rng.integers(0, 4))) for _ in range(3))
        assert_equal((u * v) * w, u * (v * w))
        assert_equal((u * v).degree, u.degree + v.degree)


def test_evaluation_composes(rng):
    for _ in range(10):
        u, v = random_poly(rng, 2), random_poly(rng, 3)
        for x in range(9):
            assert_equal((u * v)(F(x)), u(v(F(x))))


def test_right_division(rng):
    for _ in range(10):
        u, v = random_poly(rng, 5), random_poly(rng, 2)
        quo, rem = u.right_divmod(v)
        assert_equal(quo * v + rem, u)
        assert rem.degree < v.degree


def test_division_by_zero_polynomial():
    with assert_raises(NonInvertibleLeadingCoefficient):
        poly([1, 1]).right_divmod(poly([0]))


def test_right_gcd_divides_both(rng):
    w = random_poly(rng, 2)
    a, b = random_poly(rng, 2), random_poly(rng, 1)
    g = gcrd(a * w, b * w)
    assert_equal(g.lead, F(1))
    for x in (a * w, b * w):
        assert_true(x.right_divmod(g)[1].is_zero())
    assert_true(g.right_divmod(w)[1].is_zero())
    assert_equal(skew_ops(a * w, b * w, 'gcrd'), g)


def test_dispatch():
    u, v = poly([1, 2]), poly([0, 1])
    assert_equal(skew_ops(u, v), u * v)
    with assert_raises(ValueError):
        skew_ops(u, v, 'left_divmod')


def test_scalar_coefficients():
    T = Tower(FqConfig(3), N=20)
    x = random_unit(T, generator(2))
    tau = SkewPoly([T.zero(), T.one()], Q)
    prod = tau * SkewPoly([x], Q)
    assert_equal(prod.coeff(1), x.frobenius(1))
    assert_true(prod.coeff(0).is_zero())
    quo, rem = (prod + SkewPoly([x], Q)).right_divmod(SkewPoly([x], Q))
    assert_true(rem.is_zero())
    assert_equal(quo, tau + SkewPoly([T.one()], Q))


if __name__ == '__main__':
    pytest.main([__file__])
