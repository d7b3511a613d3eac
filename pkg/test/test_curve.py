import pytest
from asserts import assert_equal, assert_false, assert_raises, assert_true

from gzl.curveutils import CurveParams, KElem, PointX, aelem_ops, point_ops
from gzl.divisorutils import Divisor, RationalFunc, func_ops, principal_test, rr_space
from gzl.exception import ConfigInvalid, PointNotOnCurve
from gzl.fieldutils import FqConfig


def test_rational_points(default_curve, smoke_curve):
    pts = default_curve.rational_points()
    assert_equal(len(pts), 7)
    assert_true(pts[0].is_inf)
    assert_true(all(default_curve.on_curve(P) for P in pts))
    assert_equal(default_curve.class_number, 7)
    assert_equal(smoke_curve.class_number, 1)


def test_hasse_bound_and_quadratic_points(default_curve, smoke_curve):
    for C in (default_curve, smoke_curve):
        q, h = C.q, C.class_number
        a = q + 1 - h
        assert a * a <= 4 * q
        assert_equal(len(C.rational_points(2)), q * q + 1 - (a * a - 2 * q))


def test_group_law(default_curve):
    C = default_curve
    pts = C.rational_points()
    O = PointX.inf()
    for P in pts:
        assert_equal(C.add(P, O), P)
        assert_true(C.add(P, C.neg(P)).is_inf)
        for Q in pts:
            assert_equal(C.add(P, Q), C.add(Q, P))
            for R in pts:
                assert_equal(C.add(C.add(P, Q), R), C.add(P, C.add(Q, R)))


def test_cyclic_group_of_order_seven(default_curve):
    C = default_curve
    P = C.point(0, 1)
    assert_equal(C.order(P), 7)
    assert_true(C.mul(7, P).is_inf)
    assert_equal(C.mul(-1, P), C.neg(P))
    assert_equal(C.mul(3, P), C.add(P, C.add(P, P)))
    assert_equal(point_ops(C, P, op='scalar_mul', k=2), C.add(P, P))


def test_frobenius_fixes_rational_points(default_curve):
    C = default_curve
    assert_true(all(C.frobenius(P) == P for P in C.rational_points()))
    moved = [P for P in C.rational_points(2) if C.frobenius(P) != P]
    assert_equal(len(moved), len(C.rational_points(2)) - 7)


def test_points_off_the_curve(default_curve):
    with assert_raises(PointNotOnCurve):
        default_curve.point(0, 0)
    with assert_raises(ValueError):
        point_ops(default_curve, PointX.inf(), op='halve')


def test_singular_curves_are_rejected():
    with assert_raises(ConfigInvalid):
        CurveParams(FqConfig(3), (0, 0, 0, 0, 0))
    with assert_raises(ConfigInvalid):
        CurveParams(FqConfig(3), (0, 0, 0, 1))


def test_ring_A(default_curve):
    C = default_curve
    t, y = C.t, C.y
    assert_equal((t.deg, y.deg, (t * y).deg), (2, 3, 5))
    assert_equal(y * y, t ** 3 - t + 1)
    assert_equal((y * 2 + t).sgn, 2)
    assert_equal(aelem_ops(y * 2 + t, 'sgn'), 2)
    assert_equal((y * 2).monic(), y)
    with assert_raises(ValueError):
        C.monomial(1)
    assert_equal(C.degrees(4), [0, 2, 3, 4])


def test_norm_and_conjugate(default_curve):
    C = default_curve
    a = C.t * C.y + 1
    assert_equal(a * a.conj(), C.aelem(a.norm(), 0))
    assert_equal(a.norm().degree, a.deg)
    assert_equal(a.conj().conj(), a)


def test_embedding_at_infinity(default_curve):
    C = default_curve
    theta, eta = C.theta, C.eta
    assert_equal(theta.valuation(), -2)
    assert_equal(eta.valuation(), -3)
    assert (eta * eta - (theta ** 3 - theta + 1)).residual() >= C.tower.N - 8
    a = C.t * C.y + C.t * 2
    assert_equal(C.embed_infinity(a).valuation(), -a.deg)
    assert_equal(int(C.embed_infinity(a).sgn()), a.sgn)


def test_fractions_of_A(default_curve):
    C = default_curve
    x = KElem(C, C.y + C.t, C.poly([1, 1]))
    assert_true((x * x.inv()).is_one())
    assert_equal(x.deg, 3 - 2)
    assert_equal(KElem(C, C.t * C.t, C.poly([0, 1])), KElem(C, C.t))


def test_principal_divisors(default_curve):
    C = default_curve
    P = C.point(0, 1)
    Q = C.point(1, 1)
    assert_true(Divisor([(P, 1), (C.neg(P), 1), (PointX.inf(), -2)]).is_principal(C))
    assert_false(Divisor([(P, 1), (PointX.inf(), -1)]).is_principal(C))
    D = Divisor([(P, 1), (Q, 1), (C.neg(C.add(P, Q)), 1), (PointX.inf(), -3)])
    assert_true(principal_test(C, D)['is_principal'])
    assert_equal(principal_test(C, Divisor([(P, 1), (PointX.inf(), -1)]))['witness'], None)


def test_divisor_of_a_line(default_curve):
    C = default_curve
    P, Q = C.point(0, 1), C.point(1, 1)
    line = RationalFunc.line(C, P, Q)
    want = Divisor([(P, 1), (Q, 1), (C.neg(C.add(P, Q)), 1), (PointX.inf(), -3)])
    assert_equal(line.divisor(), want)


def test_divisor_of_t_minus(default_curve):
    C = default_curve
    P = C.point(2, 1)
    g = RationalFunc.t_minus(C, P)
    assert_equal(g.divisor(), Divisor([(P, 1), (C.neg(P), 1), (PointX.inf(), -2)]))
    assert_true(g(P).is_zero())


def test_function_dispatch(default_curve):
    C = default_curve
    P = C.point(2, 1)
    g = RationalFunc.t_minus(C, P)
    assert_true(func_ops(g, 'evaluate', P).is_zero())
    assert_equal(func_ops(g, 'divisor_of'), g.divisor())
    assert_equal(func_ops(g.inv(), 'residue_at', P), g.inv().residue_at(P))
    with assert_raises(ValueError):
        func_ops(g, 'integrate', P)


def test_residues_sum_to_zero(default_curve):
    C = default_curve
    P = C.point(0, 1)
    g = RationalFunc.t_minus(C, P).inv()
    here = g.residue_at(P)
    there = g.residue_at(C.neg(P))
    assert_equal(here, C.tower.one() / C.tower.constant(2))
    assert_true((here + there).is_zero())


@pytest.mark.parametrize('k', [1, 2, 3, 4, 5])
def test_riemann_roch_at_infinity(default_curve, k):
    assert_equal(len(rr_space(default_curve, Divisor([(PointX.inf(), k)]))), k)


def test_riemann_roch_with_affine_poles(default_curve):
    C = default_curve
    P = C.point(0, 1)
    D = Divisor([(P, 1), (PointX.inf(), 1)])
    basis = rr_space(C, D)
    assert_equal(len(basis), 2)
    assert_equal(len(rr_space(C, Divisor())), 1)


if __name__ == '__main__':
    pytest.main([__file__])
