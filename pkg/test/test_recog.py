import pytest
from asserts import assert_equal, assert_raises, assert_true

from gzl.curveutils import KElem
from gzl.exception import NotRecognized, RecognitionFailure
from gzl.rand import generator, random_aelem, random_unit
from gzl.recogutils import is_integral, minimal_poly, peel, recognize, recognize_A, recognize_K


@pytest.mark.parametrize('degree', [0, 2, 3, 5, 8])
def test_recognize_elements_of_A(default_curve, degree):
    C = default_curve
    a = random_aelem(C, degree, seed=degree, monic=False)
    assert_equal(recognize_A(C.embed_infinity(a), C), a)
    assert_equal(recognize(C.embed_infinity(a), C, mode='A'), a)


def test_peel_leaves_the_degree_one_term(default_curve):
    C = default_curve
    a = C.t * C.y + C.t + 1
    x = C.embed_infinity(a) + C.tower.monomial(1, -1)
    coeffs, r = peel(x, C)
    assert_equal(sorted(coeffs), sorted(peel(C.embed_infinity(a), C)[0]))
    assert_equal(r.valuation(), -1)
    assert_equal(peel(C.tower.monomial(1, -1), C)[0], {})
    with assert_raises(NotRecognized):
        recognize_A(x, C)


def test_recognize_fractions(default_curve):
    C = default_curve
    x = KElem(C, C.y + C.t, C.poly([1, 1]))
    assert_equal(recognize_K(x.embed_infinity(), C), x)
    base = C.embed_infinity(C.t * C.y + 2)
    got = recognize(x.embed_infinity() * base, C, mode='multiple', base=base)
    assert_equal(got, x)


def test_short_values_hold_out_a_fifth_of_their_digits(default_curve):
    C = default_curve
    a = C.t + 1
    assert_equal(recognize_A(C.embed_infinity(a).truncate(7), C), a)
    with assert_raises(NotRecognized):
        recognize_A(C.embed_infinity(a).truncate(0), C)
    x = KElem(C, C.y, C.poly([1, 1]))
    assert_equal(recognize_K(x.embed_infinity().truncate(12), C), x)


def test_random_series_are_rejected(default_curve):
    C = default_curve
    rng = generator(17)
    for _ in range(5):
        with assert_raises(RecognitionFailure):
            recognize_K(random_unit(C.tower, rng), C, den_degree=3)


def test_characteristic_polynomial(default_curve):
    C = default_curve
    a = C.t * C.y + 1
    images = [C.embed_infinity(a), C.embed_infinity(a.conj())]
    coeffs = minimal_poly(images)
    assert_equal(len(coeffs), 3)
    assert_true((coeffs[2] - 1).is_zero())
    c0, c1, c2 = is_integral(images, C)
    assert_equal(c0, a * a.conj())
    assert_equal(c1, -(a + a.conj()))
    assert_equal(c2, 1)


def test_unknown_mode(default_curve):
    with assert_raises(ValueError):
        recognize(default_curve.tower.one(), default_curve, mode='Z')


if __name__ == '__main__':
    pytest.main([__file__])
