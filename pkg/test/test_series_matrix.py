import math
from fractions import Fraction

import pytest
from asserts import assert_equal, assert_raises, assert_true

from gzl.exception import DivisionByApparentZero, PrecisionExhausted
from gzl.fieldutils import FqConfig
from gzl.matrixutils import gjinv, matdet, matident, matprod, matresidual, matvec, null_space
from gzl.rand import generator, random_unit
from gzl.scalarutils import Tower
from gzl.seriesutils import Series, TPoly

N = 40


@pytest.fixture(scope='module')
def tower():
    return Tower(FqConfig(3), N=N)


def test_laurent_series_arithmetic(tower):
    one = tower.one()
    s = Series([one, one], v=-1)
    assert_equal(s.residue(), one)
    assert_equal((s * s).coeff(-2), one)
    assert_equal(s.derivative().coeff(-2), -one)
    with assert_raises(PrecisionExhausted):
        s.coeff(1)


def test_geometric_series_in_the_parameter(tower):
    one = tower.one()
    u = Series.parameter(one, 10)
    g = (one - u).inv()
    assert_equal(g.v, 0)
    assert_true(all(g.coeff(k) == one for k in range(g.absprec)))
    assert_equal((g * (one - u) - one).residual(), math.inf)


def test_series_without_significant_terms(tower):
    zero = tower.zero()
    with assert_raises(DivisionByApparentZero):
        Series([zero, zero], v=0).inv()


def test_tpoly_products_and_evaluation(tower):
    theta = tower.uniformizer() ** -2
    p = TPoly.linear(tower, -theta)
    r = TPoly.linear(tower, theta)
    pr = p * r
    assert_equal(pr.degree, 2)
    assert_true(pr(theta).is_zero())
    assert_equal(pr.coeff(0), -(theta * theta))
    assert_true(pr.coeff(1).is_zero())


def test_tpoly_taylor_expansion(tower):
    x = random_unit(tower, generator(3))
    sq = TPoly(tower, [0, 0, 1])
    c0, c1, c2 = sq.taylor_at(x, 3)
    assert_equal(c0, x * x)
    assert_equal(c1, x * 2)
    assert_equal(c2, tower.one())


def test_tpoly_truncation(tower):
    p = TPoly(tower, [1, 1, 1, 1, 1], trunc=3)
    assert_equal(len(p.coeffs), 3)
    with assert_raises(PrecisionExhausted):
        p.coeff(3)
    assert_equal(p.shift(2).trunc, 5)


def test_scalar_matrix_inverse(tower):
    rng = generator(11)
    pi = tower.uniformizer()
    A = [[random_unit(tower, rng), pi * random_unit(tower, rng)],
         [pi * pi, random_unit(tower, rng)]]
    one, zero = tower.one(), tower.zero()
    assert matresidual(matprod(gjinv(A), A), matident(2, one, zero)) >= N // 2
    det = matdet(A)
    assert (det - (A[0][0] * A[1][1] - A[0][1] * A[1][0])).residual() >= N // 2


def test_singular_matrix(tower):
    one = tower.one()
    with assert_raises(DivisionByApparentZero):
        gjinv([[one, one], [one, one]])


def test_null_space_over_fractions():
    A = [[Fraction(1), Fraction(2), Fraction(0)], [Fraction(2), Fraction(4), Fraction(1)]]
    basis, pivots = null_space(A)
    assert_equal(pivots, [0, 2])
    assert_equal(len(basis), 1)
    assert_equal(matvec(A, basis[0]), [0, 0])


if __name__ == '__main__':
    pytest.main([__file__])
