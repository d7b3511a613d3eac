import pytest
from asserts import assert_equal, assert_true

from gzl.curveutils import AElem
from gzl.matrixutils import matvec
from gzl.motiveutils import endo_matrix, extension_block, f_v_vector, hj_verify, theta_specialize
from gzl.motiveutils import trivialization_build
from gzl.rand import generator, random_vector
from gzl.seriesutils import TPoly, residual_of
from gzl.tensorutils import AndersonFunction, TensorModule, delta_maps, omega_and_periods


def rel(a, b):
    return (a - b).residual() - b.valuation()


@pytest.fixture(scope='module', params=[1, 2])
def motive(request, smoke_drinfeld):
    module, _ = smoke_drinfeld
    data = omega_and_periods(module, request.param)
    mm = trivialization_build(data['module'], data['series'], data['periods'].Pi, check=False)
    return mm, data


@pytest.fixture
def u(motive):
    mm, _ = motive
    tower = mm.tm.tower
    return random_vector(tower, mm.n, 1, tower.N // 2, generator(mm.n + 10))


def test_trivialization(motive):
    mm, _ = motive
    loose = mm.tm.tower.N // 4
    assert min(mm.residuals.values()) >= loose, mm.residuals
    assert_equal(set(mm.residuals), {'V(-1) Phi = Theta^T V', 'Upsilon(1) = Theta Upsilon', 'det Phi'})


def test_f_v_ends_in_v(motive, u):
    mm, _ = motive
    v = [x * 1 for x in u]
    f_v = f_v_vector(mm.tm, v)
    if mm.n == 1:
        assert_true(f_v[0].is_zero())
        assert_equal(f_v[1].coeff(0), v[0])
    assert_equal(len(f_v), 2)


def test_extension_block(motive, u):
    mm, _ = motive
    block = extension_block(mm, u, check=False)
    assert min(block.residuals.values()) >= mm.tm.tower.N // 4, block.residuals
    assert_equal(len(block.Phi_v), 3)
    assert_true((block.Phi_v[2][2].coeff(0) - 1).is_zero())


def test_values_at_theta(motive, u):
    mm, data = motive
    loose = mm.tm.tower.N // 4
    out = theta_specialize(mm, u, data['periods'])
    assert out['g_v1_residual'] >= loose
    assert rel(out['period_coords'][0], data['periods'].p_n) >= loose
    assert_equal(len(out['period_coords']), 2)
    assert_true('ratio' in out)


def test_delta_maps(motive, u):
    mm, _ = motive
    out = hj_verify(mm, u)
    assert min(r for k, r in out.items() if k != 'lattice_element') >= mm.tm.tower.N // 4
    assert_true(isinstance(out['lattice_element'], AElem))


def test_delta_maps_recover_v(motive, u):
    mm, _ = motive
    tm = mm.tm
    v = AndersonFunction(mm.series, u).exp_u
    Vf = matvec(mm.V, f_v_vector(tm, v))
    out = delta_maps(tm, Vf[0], Vf[1])
    floor = min(x.valuation() for x in v)
    for key in ('delta0', 'delta1'):
        assert_equal(len(out[key]), mm.n)
        assert residual_of([a - b for a, b in zip(out[key], v)]) - floor >= tm.tower.N // 4


def test_endomorphism_matrix_of_t(smoke_drinfeld):
    tm = TensorModule(smoke_drinfeld[0], 2)
    tower = tm.tower
    t = TPoly.linear(tower, 0)
    M = endo_matrix(tm, tm.curve.t)
    assert_equal(len(M), 2)
    assert residual_of([M[0][0] - t, M[0][1], M[1][0], M[1][1] - t]) >= tower.N // 8


if __name__ == '__main__':
    pytest.main([__file__])
