import pytest
from asserts import assert_equal, assert_false, assert_raises, assert_true

from gzl.exception import CutoffExceeded, ZeroIdeal
from gzl.idealutils import IdealA, class_and_generator, enumerate_ideals, enumerate_ideals_hnf
from gzl.idealutils import goss_bracket, ideal_class, ideal_ops, prime_ideal, quotient_size


def expected_count(q, h, d):
    """Coefficients of L(u) / (1 - q u) with L(u) = 1 - (q + 1 - h) u + q u^2"""
    if d == 0:
        return 1
    if d == 1:
        return h - 1
    return h * q ** (d - 1)


@pytest.mark.parametrize('d', [0, 1, 2, 3])
def test_ideal_counts(default_curve, smoke_curve, d):
    for C in (default_curve, smoke_curve):
        assert_equal(len(enumerate_ideals(C, d)), expected_count(C.q, C.class_number, d))


@pytest.mark.parametrize('d', [0, 1, 2])
def test_hermite_scan_agrees(default_curve, d):
    C = default_curve
    lazy = {I.ideal for I in enumerate_ideals(C, d)}
    assert_equal(len(lazy), len(enumerate_ideals_hnf(C, d)))
    assert_equal(lazy, set(enumerate_ideals_hnf(C, d)))


def test_cutoff(default_curve):
    with assert_raises(CutoffExceeded):
        enumerate_ideals(default_curve, 3, cutoff=2)
    assert_equal(enumerate_ideals(default_curve, -1), [])


def test_prime_ideals(default_curve):
    C = default_curve
    P = prime_ideal(C, C.point(0, 1))
    assert_equal(P.degree, 1)
    assert_true(P.contains(C.t))
    assert_false(P.contains(C.y))
    assert_true(P.contains(C.y - 1))
    assert_true(P.is_ideal())
    assert_equal(quotient_size(P), 3)
    assert_equal(quotient_size(P * P), 9)
    assert_equal(P * P.conj(), IdealA.principal(C, C.t))


def test_inverse_and_powers(default_curve):
    C = default_curve
    P = prime_ideal(C, C.point(1, 2))
    unit = IdealA.unit(C)
    assert_equal(P * P.inverse(), unit)
    assert_false(P.inverse().is_integral)
    assert_equal(P ** 0, unit)
    assert_equal((P ** 2).degree, 2)
    assert_equal(ideal_ops(P, P, op='degree'), 1)
    assert_true(ideal_ops(P, op='membership', x=C.t - 1))


def test_zero_ideal(default_curve):
    with assert_raises(ZeroIdeal):
        IdealA.from_generators(default_curve, [0])


def test_class_map_is_a_homomorphism(default_curve):
    C = default_curve
    pts = C.rational_points()[1:]
    for A in pts:
        for B in pts:
            I = IdealA.from_generators(C, prime_ideal(C, A).basis()) * \
                IdealA.from_generators(C, prime_ideal(C, B).basis())
            assert_equal(ideal_class(I).point, C.add(A, B))


def test_enumerated_classes(default_curve):
    C = default_curve
    for d in (1, 2):
        for I in enumerate_ideals(C, d):
            assert_equal(I.ideal.degree, d)
            assert_equal(ideal_class(IdealA(C, I.ideal.a, I.ideal.b, I.ideal.c)).point, I.cls.point)


def test_class_number_kills_every_class(default_curve):
    C = default_curve
    P = prime_ideal(C, C.point(0, 1))
    res = class_and_generator(P ** C.class_number)
    assert_true(res['principal'])
    assert_equal(res['generator'].deg, C.class_number)
    assert_equal(res['generator'].sgn, 1)
    assert_false(class_and_generator(P)['principal'])


def test_goss_bracket_of_principal_ideals(default_curve):
    C = default_curve
    x = C.t * C.y * 2 + C.t + 1
    b = goss_bracket(IdealA.principal(C, x))
    want = C.embed_infinity(x)
    assert_equal(b.valuation(), -x.deg)
    assert_equal(int(b.sgn()), 1)
    assert_equal(b, want / C.tower.constant(want.sgn()))


def test_goss_bracket_of_prime_ideals(default_curve):
    C = default_curve
    N = C.tower.N
    P = prime_ideal(C, C.point(0, 1))
    b = goss_bracket(P, C.class_number)
    assert_equal(b.valuation(), -1)
    assert_equal(int(b.sgn()), 1)
    for I in enumerate_ideals(C, 1)[:3]:
        lazy = goss_bracket(I, C.class_number)
        exact = goss_bracket(IdealA(C, I.ideal.a, I.ideal.b, I.ideal.c), C.class_number)
        assert (lazy - exact).residual() - lazy.valuation() >= N // 4


if __name__ == '__main__':
    pytest.main([__file__])
