import math
from fractions import Fraction

import pytest
from asserts import assert_equal, assert_false, assert_raises, assert_true

from gzl.exception import DivisionByApparentZero, NotOneUnit, PrecisionExhausted
from gzl.exception import RamificationOverflow
from gzl.fieldutils import FqConfig
from gzl.rand import generator, random_scalar, random_unit
from gzl.scalarutils import Scalar, Tower, frobenius, scalar_arith, unit_root

N = 40


@pytest.fixture(scope='module')
def tower():
    return Tower(FqConfig(3), N=N)


@pytest.fixture
def rng():
    return generator(7)


def test_additive_identity(tower):
    pi = tower.uniformizer()
    assert_equal(pi + 0, pi)
    assert_true((pi + 0).is_exact)


def test_geometric_series():
    T = Tower(FqConfig(3), N=8)
    x = (T.one() - T.uniformizer()).inv()
    assert_equal([int(c) for c in x.coeffs], [1] * 8)
    assert_equal(x.prec, 8)


def test_inverse_pairs(tower, rng):
    for _ in range(20):
        x = random_unit(tower, rng) * tower.monomial(1, int(rng.integers(-3, 4)))
        assert (x * x.inv() - 1).residual() >= N - 1


def test_subtraction_undoes_addition(tower, rng):
    for _ in range(20):
        x, y = random_scalar(tower, 0, N, rng), random_unit(tower, rng)
        assert_equal((x + y) - y, x)


def test_valuation_is_exact(tower, rng):
    x = random_unit(tower, rng) * tower.monomial(2, 3)
    y = random_unit(tower, rng) * tower.monomial(1, -1)
    assert_equal(x.valuation(), Fraction(3))
    assert_equal((x * y).valuation(), x.valuation() + y.valuation())
    assert_equal((x + y).valuation(), min(x.valuation(), y.valuation()))


def test_exact_and_inexact_zero(tower):
    pi = tower.uniformizer()
    assert_equal((pi - pi).valuation(), math.inf)
    assert_equal((pi - pi).residual(), math.inf)
    loose = tower.zero(absprec=5)
    assert_true(loose.is_zero())
    assert_equal(loose.residual(), Fraction(5))
    with assert_raises(PrecisionExhausted):
        loose.valuation()
    with assert_raises(PrecisionExhausted):
        loose.sgn()


def test_division_by_apparent_zero(tower):
    with assert_raises(DivisionByApparentZero):
        tower.one() / tower.zero(absprec=3)
    with assert_raises(ZeroDivisionError):
        tower.one() / 0


def test_product_precision_rule(tower):
    x = tower.series([1, 1, 1], v=0, absprec=10)
    y = tower.series([1, 2], v=2, absprec=12)
    xy = x * y
    assert_equal(xy.prec, 10)
    assert_equal(xy.absprec, 12)


def test_digits_beyond_precision_change_nothing(tower, rng):
    cut = N // 2
    for _ in range(20):
        x = random_scalar(tower, 0, N, rng)
        z = random_unit(tower, rng)
        a = x.truncate(cut)
        b = (x + tower.monomial(1, cut + 1)).truncate(cut)
        assert_equal(a, b)
        assert_equal(a * z, b * z)
        assert (a * z).absprec <= cut


def test_sign_and_one_unit(tower):
    x = tower.series([2, 1, 1], v=-2)
    assert_equal(int(x.sgn()), 2)
    u = x.one_unit()
    assert_equal(u.valuation(), 0)
    assert_equal(int(u.sgn()), 1)
    assert_equal(tower.monomial(x.sgn(), -2) * u, x)


def test_frobenius_monomial(tower):
    pi = tower.uniformizer(2)
    assert_equal(pi.frobenius(1), tower.monomial(1, 3, 2))


def test_frobenius_inverse_pair(tower, rng):
    for _ in range(10):
        x = random_scalar(tower, -1, 12, rng)
        assert_equal(frobenius(frobenius(x, 1), -1), x)


def test_frobenius_is_a_ring_homomorphism(tower, rng):
    for _ in range(10):
        x, y = random_unit(tower, rng), random_unit(tower, rng)
        assert ((x * y).frobenius(1) - x.frobenius(1) * y.frobenius(1)).residual() >= N - 1
        assert ((x + y).frobenius(1) - x.frobenius(1) - y.frobenius(1)).residual() >= N - 1


def test_inverse_frobenius_on_residue_field():
    T = Tower(FqConfig(3, s=2), N=10)
    F = T.field
    for a in range(1, F.order):
        c = T.constant(F(a))
        root = c.frobenius(-1)
        assert_equal(root, T.constant(F(a) ** 3))
        assert_equal(root.frobenius(1), c)


def test_ramification_cap():
    T = Tower(FqConfig(3), N=10, M=1, M_cap=1)
    x = T.series([1, 1])
    x.frobenius(-1)
    with assert_raises(RamificationOverflow):
        x.frobenius(-2)


def test_unit_root_identity(tower, rng):
    x = random_unit(tower, rng).one_unit()
    assert_equal(unit_root(x, 1), x)


def test_unit_root_freshmans_dream(tower):
    pi = tower.uniformizer()
    assert_equal(unit_root(tower.one() + pi ** 3, 3), tower.one() + pi)


@pytest.mark.parametrize('h', [2, 3, 6, 7])
def test_unit_root_powers_back(tower, rng, h):
    x = random_unit(tower, rng).one_unit()
    y = unit_root(x, h)
    need = N // 6 if h % 3 == 0 else N // 2
    assert (y ** h - x).residual() >= need


def test_unit_root_needs_a_one_unit(tower):
    with assert_raises(NotOneUnit):
        unit_root(tower.constant(2), 2)
    with assert_raises(NotOneUnit):
        unit_root(tower.uniformizer(), 2)


def test_nth_root_of_a_monomial(tower):
    x = tower.monomial(1, 2)
    r = x.nth_root(2)
    assert_equal(r.valuation(), Fraction(1))
    assert_equal(r * r, x)


def test_dispatch(tower, rng):
    x, y = random_unit(tower, rng), random_unit(tower, rng)
    assert_equal(scalar_arith(x, y, 'add'), x + y)
    assert_equal(scalar_arith(x, y, 'mul'), x * y)
    assert_equal(scalar_arith(x, y, 'div'), x / y)
    assert_equal(scalar_arith(x, y, 'inv'), x.inv())
    with assert_raises(ValueError):
        scalar_arith(x, y, 'pow')


def test_json_round_trip(tower, rng):
    x = random_unit(tower, rng).inv()
    data = x.to_json()
    assert_equal(set(data), {'e', 'v', 'prec', 'coeffs'})
    assert_equal(Scalar.from_json(tower, data), x)
    assert_false(Scalar.from_json(tower, data).is_exact)


if __name__ == '__main__':
    pytest.main([__file__])
