"""Rigid analytic trivializations of the tensor powers and their extensions.

Matrices here have entries in t: exact polynomials (:class:`TPoly` with no
truncation) for Phi, Theta and V, truncated series for Upsilon. The sign
convention for the Anderson functions is

    (E_1, E_2)^(1) = Theta (E_1, E_2) + f_v,     E_(i+2) = (t - theta) E_i - a_i E_(i+1) + v_i

with v = Exp(u), so that f_v = Theta_n .. Theta_2 (0, v_1) + .. + (0, v_n).
Coordinates past n are twists: E_(n+c) = E_c^(1).

Psi = ((V Upsilon^(1))^T)^-1 satisfies Psi^(-1) = Phi Psi, and the
extension by v has

    Phi_v = [[Phi, 0], [(V f_v)^T, 1]],     Psi_v = [[Psi, 0], [g_v^T Psi, 1]]

with g_v = -V (E_1, E_2)^(1).
"""
import logging
import math
from dataclasses import dataclass, field

from gzl.exception import IdentityResidual, PoleAtTheta
from gzl.matrixutils import gjinv, matadd, matident, matprod, matscale
from gzl.matrixutils import matsub, matvec, transpose
from gzl.recogutils import recognize_A, recognize_K
from gzl.seriesutils import TPoly
from gzl.tensorutils import AndersonFunction, ExpLogSeries, PeriodData
from gzl.tensorutils import TensorModule, _peel, _vector_residual, delta0
from gzl.tensorutils import delta1, delta_matrix, poly_at_matrix

logger = logging.getLogger(__name__)

__all__ = [
    'MotiveMatrices',
    'ExtensionBlock',
    'trivialization_build',
    'endo_matrix',
    'f_v_vector',
    'extension_block',
    'theta_specialize',
    'hj_verify',
]


def _poly(tm: TensorModule, coeffs) -> TPoly:
    return TPoly(tm.tower, coeffs)


def _t_minus_theta(tm: TensorModule) -> TPoly:
    return TPoly.linear(tm.tower, -tm.curve.theta)


def _step(tm: TensorModule, c) -> list:
    """[[0, 1], [t - theta, -c]]"""
    return [[_poly(tm, []), _poly(tm, [1])], [_t_minus_theta(tm), _poly(tm, [-c])]]


def _matfrob(A: list, k: int) -> list:
    return [[x.frobenius(k) for x in row] for row in A]


def _flat(A) -> list:
    out = []
    for x in A:
        if isinstance(x, list):
            out.extend(_flat(x))
        elif isinstance(x, TPoly):
            out.extend(x.coeffs)
        else:
            out.append(x)
    return out


def _residual(lhs, rhs) -> float:
    """Relative residual of two equal-shaped vectors or matrices"""
    if lhs and isinstance(lhs[0], list):
        diff = matsub(lhs, rhs)
    else:
        diff = [a - b for a, b in zip(lhs, rhs)]
    return _vector_residual(diff, _flat(lhs))


def _ext_at(E: AndersonFunction, coord: int, t0, twist: int = 0):
    """Extended coordinate E_coord^(twist)(t0)"""
    if coord > E.n:
        return _ext_at(E, coord - E.n, t0, twist + 1)
    return E.at(t0, twist=twist)[coord - 1]


@dataclass
class MotiveMatrices:
    """Theta, Phi, V and the trivialization Upsilon at one branch"""

    tm: TensorModule
    series: ExpLogSeries
    Theta: list
    Phi: list
    V: list
    V_prev: list
    Upsilon: list
    columns: list
    trunc: int
    residuals: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.tm.n

    def P(self) -> list:
        """V Upsilon^(1); its columns are the points P_i"""
        return matprod(self.V, _matfrob(self.Upsilon, 1))

    def psi_inverse_at(self, t0, k: int = 0) -> list:
        """(Psi^-1)^(k)(t0) = (Upsilon^(k+1))^T V^(k) from the resolvent of each column"""
        a_n = self.tm.a[-1].frobenius(k)
        rows = []
        for E in self.columns:
            x1 = _ext_at(E, 1, t0, twist=k + 1)
            x2 = _ext_at(E, 2, t0, twist=k + 1)
            rows.append([a_n * x1 + x2, x1])
        return rows


def trivialization_build(tm: TensorModule, series: ExpLogSeries, Pi: list, trunc: int = 12,
                         check: bool = True) -> MotiveMatrices:
    """Theta = Theta_n .. Theta_1, Phi = phi_n .. phi_1 and Upsilon from the lattice {Pi, d[eta] Pi}"""
    n = tm.n
    one, zero = _poly(tm, [1]), _poly(tm, [])
    Theta = [[one, zero], [zero, one]]
    Phi = [[one, zero], [zero, one]]
    for i in range(n):
        Theta = matprod(_step(tm, tm.a[i]), Theta)
        Phi = matprod(_step(tm, tm.b[i]), Phi)
    V = [[_poly(tm, [tm.a[-1]]), one], [one, zero]]
    V_prev = [[_poly(tm, [tm.b[-1]]), one], [one, zero]]
    columns = [AndersonFunction(series, u) for u in (Pi, matvec(tm.d_eta, Pi))]
    Upsilon = [[E.coordinate_series(r, trunc) for E in columns] for r in (1, 2)]
    mm = MotiveMatrices(tm, series, Theta, Phi, V, V_prev, Upsilon, columns, trunc)
    det = Phi[0][0] * Phi[1][1] - Phi[0][1] * Phi[1][0]
    expected = _t_minus_theta(tm) ** n * (-1) ** n
    mm.residuals = {
        'V(-1) Phi = Theta^T V': _residual(matprod(V_prev, Phi), matprod(transpose(Theta), V)),
        'Upsilon(1) = Theta Upsilon': _residual(_matfrob(Upsilon, 1), matprod(Theta, Upsilon)),
        'det Phi': _vector_residual((det - expected).coeffs, expected.coeffs),
    }
    if check:
        _require(tm, mm.residuals)
    logger.debug(f'motive matrices for n={n}: {mm.residuals}')
    return mm


def _require(tm: TensorModule, residuals: dict):
    failed = {k: r for k, r in residuals.items() if r < tm.tol // 2}
    if failed:
        raise IdentityResidual(f'identities fail to precision: {failed}')


def endo_matrix(tm: TensorModule, a) -> list:
    """Matrix M of a on the basis {h_1, h_2}: a h_i = M_i1 h_1 + M_i2 h_2 with M_ij in C_inf[t]"""
    n = tm.n
    T, Y = tm._frame
    a_series = tm._as_series(a(T, Y))
    rows = []
    for j in (1, 2):
        top = j + a.deg
        m = (top - 1) // n
        coeffs, _, res = _peel(a_series * tm.H(j, m), range(top, 0, -1),
                               lambda K: tm.H(K, m), lambda K: -(n + K))
        if res < tm.tol:
            raise IdentityResidual(f'a h_{j} is not a combination of the twisted h-basis ({res})')
        rows.append(_reduce(tm, coeffs, m))
    logger.debug(f'endomorphism matrix of a degree-{a.deg} element for n={n}')
    return rows


def _reduce(tm: TensorModule, coeffs: dict, m: int) -> list:
    """Rewrite sum c_K H_K^(m) as p_1 h_1^(m) + p_2 h_2^(m) and untwist p_1, p_2"""
    zero = _poly(tm, [])
    polys = {K: _poly(tm, [c]) for K, c in coeffs.items()}
    for K in sorted(polys, reverse=True):
        if K <= 2:
            continue
        c = polys.pop(K)
        th, b, _ = tm.three_term(K - 2, m)
        # H_K = (t - theta') H_(K-2) - b' H_(K-1)
        polys[K - 2] = polys.get(K - 2, zero) + c * TPoly.linear(tm.tower, -th)
        polys[K - 1] = polys.get(K - 1, zero) - c * b
    return [polys.get(i, zero).frobenius(-m) for i in (1, 2)]


def f_v_vector(tm: TensorModule, v: list) -> list:
    """Theta_n .. Theta_2 (0, v_1) + .. + Theta_n (0, v_(n-1)) + (0, v_n)"""
    zero = _poly(tm, [])
    acc = [zero, zero]
    for i in range(tm.n):
        if i:
            acc = matvec(_step(tm, tm.a[i]), acc)
        acc = [acc[0], acc[1] + _poly(tm, [v[i]])]
    return acc


@dataclass
class ExtensionBlock:
    """Phi_v and the pieces of Psi_v for the extension by v = Exp(u)"""

    mm: MotiveMatrices
    u: list
    v: list
    E: AndersonFunction
    f_v: list
    h_v: list
    residuals: dict = field(default_factory=dict)

    @property
    def Phi_v(self) -> list:
        tm = self.mm.tm
        zero, one = _poly(tm, []), _poly(tm, [1])
        Phi = self.mm.Phi
        return [[Phi[0][0], Phi[0][1], zero], [Phi[1][0], Phi[1][1], zero], [self.h_v[0], self.h_v[1], one]]

    def X(self, trunc: int) -> list:
        return [self.E.coordinate_series(1, trunc), self.E.coordinate_series(2, trunc)]

    def g_v(self, trunc: int) -> list:
        """-V (E_1, E_2)^(1)"""
        return [-x for x in matvec(self.mm.V, [x.frobenius(1) for x in self.X(trunc)])]

    def psi_v_at(self, t0, k: int = 0) -> list:
        """Psi_v^(k)(t0), inverting the trivialization at t0"""
        tm = self.mm.tm
        one, zero = tm.tower.one(), tm.tower.zero()
        Psi = gjinv(self.mm.psi_inverse_at(t0, k))
        V = [[tm.a[-1].frobenius(k), one], [one, zero]]
        X1 = [_ext_at(self.E, 1, t0, twist=k + 1), _ext_at(self.E, 2, t0, twist=k + 1)]
        g = [-x for x in matvec(V, X1)]
        bottom = [g[0] * Psi[0][0] + g[1] * Psi[1][0], g[0] * Psi[0][1] + g[1] * Psi[1][1]]
        return [[Psi[0][0], Psi[0][1], zero], [Psi[1][0], Psi[1][1], zero], [bottom[0], bottom[1], one]]


def extension_block(mm: MotiveMatrices, u: list, trunc: int | None = None, check: bool = True) -> ExtensionBlock:
    """The extension attached to v = Exp(u), with its defining identities checked"""
    tm = mm.tm
    trunc = trunc or mm.trunc
    E = AndersonFunction(mm.series, u)
    v = E.exp_u
    f_v = f_v_vector(tm, v)
    block = ExtensionBlock(mm, list(u), v, E, f_v, matvec(mm.V, f_v))
    X = block.X(trunc)
    rhs = [a + b for a, b in zip(matvec(mm.Theta, X), f_v)]
    g = block.g_v(trunc)
    # twisted up: Psi = Phi^(1) Psi^(1) gives (Phi^T)^(1) g_v = g_v^(1) + h_v^(1)
    lhs = matvec(transpose(_matfrob(mm.Phi, 1)), g)
    want = [a.frobenius(1) + b.frobenius(1) for a, b in zip(g, block.h_v)]
    Phi1 = [[x.frobenius(1)(0) for x in row] for row in block.Phi_v]
    psi0 = block.psi_v_at(0)
    block.residuals = {
        'X(1) = Theta X + f_v': _residual([x.frobenius(1) for x in X], rhs),
        '(Phi^T)(1) g_v = (g_v + h_v)(1)': _residual(lhs, want),
        'Psi_v = Phi_v(1) Psi_v(1) at 0': _residual(psi0, matprod(Phi1, block.psi_v_at(0, 1))),
    }
    if check:
        _require(tm, block.residuals)
    logger.debug(f'extension block for n={tm.n}: {block.residuals}')
    return block


def theta_specialize(mm: MotiveMatrices, u: list | None = None, periods: PeriodData | None = None,
                     den_degree: int = 6) -> dict:
    """Values at t = theta.

    period_coords are -[Psi^-1]_(i,1)(theta); the first is p_n. With u given,
    g_(v,1)(theta) = u_n - v_n is read off the resolvent and compared.
    """
    tm = mm.tm
    theta = tm.curve.theta
    try:
        inv = mm.psi_inverse_at(theta)
    except PoleAtTheta as exc:
        raise PoleAtTheta(f'trivialization entry is singular at theta: {exc}') from exc
    out = {'period_coords': [-row[0] for row in inv]}
    if u is not None:
        E = AndersonFunction(mm.series, u)
        v = E.exp_u
        x1 = _ext_at(E, 1, theta, twist=1)
        x2 = _ext_at(E, 2, theta, twist=1)
        g1 = -(tm.a[-1] * x1 + x2)
        expected = u[-1] - v[-1]
        out['g_v1'] = g1
        out['g_v1_residual'] = _vector_residual(g1 - expected, [g1, expected])
    if periods is not None:
        ratio = out['period_coords'][0] / periods.pi_rho ** tm.n
        out['ratio'] = ratio
        if tm.curve.class_number == 1:
            out['recognized'] = recognize_K(ratio, tm.curve, den_degree)
    return out


def _w_matrices(tm: TensorModule, E: AndersonFunction, v: list, M: list):
    """w_1(M), w_2(M) for w = V (E_1, E_2)^(1):

    w_1 = (t - theta) E_n + v_n = v_n - u_n + (t - theta) E_n^(j>=1), w_2 = E_1^(1)
    """
    n = tm.n
    one, zero = tm.tower.one(), tm.tower.zero()
    I = matident(n, one, zero)
    tail = E.at_matrix(M, n, twist=0, start=1)
    shift = matsub(M, matscale(I, tm.curve.theta))
    W1 = matadd(matscale(I, v[-1] - E.u[-1]), matprod(shift, tail))
    W2 = E.at_matrix(M, 1, twist=1)
    return W1, W2


def delta0_P(tm: TensorModule, E: AndersonFunction, v: list, sign: int = -1) -> list:
    """delta_0 of sign * V (E_1, E_2)^(1); sign -1 gives P_zeta"""
    W1, W2 = _w_matrices(tm, E, v, delta_matrix(tm))
    return [c * sign for c in delta0(tm, W1, W2)]


def hj_verify(mm: MotiveMatrices, u: list) -> dict:
    """Residuals of the delta-map identities for the extension by Exp(u):

    Exp(delta_0(P_i)) = 0, delta_0(V f_v) = delta_1(V f_v) = v,
    Exp(delta_0(P_zeta) + delta_0(V f_v)) = v, Exp(delta_0(P_zeta) + v - u) = 0
    """
    tm = mm.tm
    series = mm.series
    zero_v = [tm.tower.zero()] * tm.n
    out = {}
    worst = math.inf
    for E in mm.columns:
        d = delta0_P(tm, E, zero_v, sign=1)
        worst = min(worst, _vector_residual(series.exp(d), d))
    out['Exp(delta0(P_i)) = 0'] = worst

    E = AndersonFunction(series, u)
    v = E.exp_u
    Vf = matvec(mm.V, f_v_vector(tm, v))
    M = delta_matrix(tm)
    d0f = delta0(tm, poly_at_matrix(Vf[0], M), poly_at_matrix(Vf[1], M))
    out['delta0(V f_v) = v'] = _residual(d0f, v)
    out['delta1(V f_v) = v'] = _residual(delta1(tm, Vf[0], Vf[1]), v)
    dz = delta0_P(tm, E, v, sign=-1)
    out['Exp(delta0(P_zeta + V f_v)) = v'] = _residual(series.exp([a + b for a, b in zip(dz, d0f)]), v)
    lattice = [a + b - c for a, b, c in zip(dz, v, u)]
    out['delta0(P_zeta) + v - u in lattice'] = _vector_residual(series.exp(lattice), u)
    _require(tm, out)
    if tm.curve.class_number == 1:
        # the difference is d[a] Pi_n; its last coordinate is a(theta) p_n
        p_n = mm.columns[0].u[-1]
        if _vector_residual(lattice, u) >= tm.tol:
            out['lattice_element'] = tm.curve.aelem()
        else:
            out['lattice_element'] = recognize_A(lattice[-1] / p_n, tm.curve)
    logger.debug(f'delta-map identities for n={tm.n} hold: {out}')
    return out


if __name__ == '__main__':
    __import__('doctest').testmod(optionflags=4 | 8 | 32)
