"""Tensor powers of the sign-normalized Drinfeld module at one branch.

The t-module rho^(n) is read off from two families of functions on the
curve: g_1..g_n (a basis of the A-motive, poles at V) and h_1..h_n (the
dual motive, poles at infinity). Multiplication by t on the twisted
bases

    G_(mn+j) = prod_{l<m} (f^(l))^n g_j^(m)
    H_(in+j)^(m) = prod_{l<i} (f^(m-l))^n h_j^(m-i)

is three-term, and peeling z-expansions at infinity against these bases
gives every structure constant without solving a linear system.

Everything here lives at one embedding of H, i.e. on the data of one
:class:`gzl.drinfeldutils.DrinfeldModule`; :func:`structure_helems` and
:func:`period_ratio` assemble the branches.
"""
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from gzl.curveutils import AElem, PointX
from gzl.divisorutils import Divisor, local_chart, rr_space
from gzl.drinfeldutils import DrinfeldModule, HElem, HilbertField
from gzl.exception import ExpansionDivergence, FunctionalEquationResidual
from gzl.exception import IdentityResidual, OutsideConvergenceRegion
from gzl.exception import PoleAtTheta, ResidueMismatch, SylvesterSingular
from gzl.exception import TruncationTooSmall, UnsupportedField
from gzl.matrixutils import gjinv, matadd, matfrob, matident, matprod
from gzl.matrixutils import matresidual, matscale, matsub, matvec, matzero
from gzl.recogutils import recognize_H, recognize_K
from gzl.scalarutils import Scalar
from gzl.seriesutils import Series, TPoly, residual_of

logger = logging.getLogger(__name__)

__all__ = [
    'BasisFunctions',
    'TensorModule',
    'ExpLogSeries',
    'TateVector',
    'AndersonFunction',
    'Omega',
    'PeriodData',
    'basis_functions',
    'module_matrices',
    'exp_coeffs',
    'log_coeffs',
    'omega_and_periods',
    'anderson_gen',
    'delta_maps',
    'exp_log_eval',
    'poly_at_matrix',
    'log_residue',
    'log_bottom_row',
    'delta_matrix',
    'delta0',
    'delta1',
    'sigma_minus_one_delta1',
    'structure_helems',
    'period_ratio',
]


def _valuation_floor(x) -> float:
    """Least valuation among the significant entries of a nested list"""
    if isinstance(x, (list, tuple)):
        return min((_valuation_floor(y) for y in x), default=math.inf)
    if isinstance(x, Scalar):
        return math.inf if x.is_zero() else x.valuation()
    return math.inf


def _vector_residual(x, ref) -> float:
    """Residual of x relative to the size of ref"""
    floor = _valuation_floor(ref)
    res = residual_of(x)
    if floor == math.inf:
        return res
    return res - floor


class BasisFunctions:
    """g_1..g_n and h_1..h_n with the divisors

        div g_j = -n(V) + (n-j)(inf) + (j-1)(Xi) + ([j-1]V1 + [n-j+1]V)
        div h_j = n(V1) - (n+j)(inf) + (j-1)(Xi) + (-[n-j+1]V1 - [j-1]V)

    each scaled to sign 1 at infinity.
    """

    def __init__(self, module: DrinfeldModule, n: int):
        if n < 1:
            raise ValueError(f'tensor power must be positive, got {n}')
        self.module = module
        self.curve = module.curve
        self.n = n

    def __repr__(self):
        return f'BasisFunctions(n={self.n}, branch={self.module.shtuka.branch!r})'

    def g_divisor(self, j: int) -> Divisor:
        C, sh, n = self.curve, self.module.shtuka, self.n
        W = C.add(C.mul(j - 1, sh.V1), C.mul(n - j + 1, sh.V))
        terms = [(sh.V, -n), (PointX.inf(), n - j), (W, 1)]
        if j > 1:
            terms.append((C.xi, j - 1))
        return Divisor(terms)

    def h_divisor(self, j: int) -> Divisor:
        C, sh, n = self.curve, self.module.shtuka, self.n
        W = C.neg(C.add(C.mul(n - j + 1, sh.V1), C.mul(j - 1, sh.V)))
        terms = [(sh.V1, n), (PointX.inf(), -(n + j)), (W, 1)]
        if j > 1:
            terms.append((C.xi, j - 1))
        return Divisor(terms)

    def _normalized(self, E: Divisor):
        funcs = rr_space(self.curve, -E)
        g = funcs[0]
        return g / g.sgn()

    @cached_property
    def g(self) -> list:
        return [self._normalized(self.g_divisor(j)) for j in range(1, self.n + 1)]

    @cached_property
    def h(self) -> list:
        return [self._normalized(self.h_divisor(j)) for j in range(1, self.n + 1)]


def _peel(r: Series, ks, basis, order_of):
    """Coefficients c_k, for k in ks (descending), with r = sum c_k basis(k) + rest.

    Returns (coeffs, rest, relative residual of rest).
    """
    coeffs = {}
    parts = [r]
    for k in ks:
        S = basis(k)
        o = order_of(k)
        c = r.coeff(o) / S.coeff(o)
        coeffs[k] = c
        term = S * c
        parts.append(term)
        r = r - term
    return coeffs, r, _series_residual(r, parts)


def _working_scale(x):
    """Valuation of the terms x was summed from: its own if exact, its precision less N if not"""
    if not isinstance(x, Scalar):
        return math.inf
    if x.is_exact:
        return math.inf if x.is_zero() else x.valuation()
    return Fraction(x.absprec, x.e) - x.tower.N


def _series_residual(rest: Series, parts) -> float:
    """Least relative residual over the orders of rest, each against the scale it was computed at"""
    worst = math.inf
    for o in range(rest.v, rest.absprec):
        c = rest.coeff(o)
        scale = _working_scale(c)
        for S in parts:
            if S.v <= o < S.absprec:
                scale = min(scale, _working_scale(S.coeff(o)))
        if scale == math.inf:
            continue
        worst = min(worst, c.residual() - scale)
    return worst


def _tw_mul(P: list, Q: list) -> list:
    """(sum P_i tau^i)(sum Q_j tau^j) = sum P_i Q_j^(i) tau^(i+j) for matrix coefficients"""
    out = [None] * (len(P) + len(Q) - 1)
    for i, A in enumerate(P):
        for j, B in enumerate(Q):
            term = matprod(A, matfrob(B, i))
            out[i + j] = term if out[i + j] is None else matadd(out[i + j], term)
    return out


def _tw_add(P: list, Q: list) -> list:
    n = len(P[0])
    zero = matzero(n, n, P[0][0][0] * 0)
    out = []
    for i in range(max(len(P), len(Q))):
        a = P[i] if i < len(P) else zero
        b = Q[i] if i < len(Q) else zero
        out.append(matadd(a, b))
    return out


def _tw_apply(P: list, x: list) -> list:
    """sum P_k x^(k)"""
    acc = None
    for k, A in enumerate(P):
        term = matvec(A, [c.frobenius(k) for c in x])
        acc = term if acc is None else [a + b for a, b in zip(acc, term)]
    return acc


def poly_at_matrix(p: TPoly, M: list) -> list:
    """p(M) by Horner; p is a polynomial in t with scalar coefficients"""
    n = len(M)
    tower = p.tower
    one, zero = tower.one(), tower.zero()
    acc = matzero(n, n, zero)
    for c in reversed(p.coeffs):
        acc = matadd(matprod(acc, M), matscale(matident(n, one, zero), c))
    return acc


class TensorModule:
    """rho^(n) at one branch: d[theta], E_theta, d[eta], a_i, b_i

    `length` is the relative length of the z-expansions at infinity.
    """

    def __init__(self, module: DrinfeldModule, n: int, length: int | None = None):
        self.module = module
        self.curve = module.curve
        self.tower = module.curve.tower
        self.n = n
        self.q = module.q
        self.basis = BasisFunctions(module, n)
        self.length = length or 2 * n + 16
        self._G = {}
        self._H = {}
        self._Fprod = {}
        self._three = {}
        self.tol = self.tower.N // 2

    def __repr__(self):
        return f'TensorModule(n={self.n}, branch={self.module.shtuka.branch!r})'

    # == expansions at infinity

    @cached_property
    def _frame(self):
        one = self.tower.one()
        return self.curve.infinity_series(self.length, like=one)

    @cached_property
    def F(self) -> Series:
        return self.module.f.on_series(*self._frame)

    @cached_property
    def _g_series(self) -> list:
        return [g.on_series(*self._frame) for g in self.basis.g]

    @cached_property
    def _h_series(self) -> list:
        return [h.on_series(*self._frame) for h in self.basis.h]

    def _split(self, k: int):
        """k = i n + j with 1 <= j <= n"""
        i, r = divmod(k - 1, self.n)
        return i, r + 1

    def Fn_prod(self, lo: int, hi: int) -> Series:
        """prod_{lo <= l < hi} (F^(l))^n"""
        key = (lo, hi)
        if key not in self._Fprod:
            acc = None
            for l in range(lo, hi):
                term = self.F.frobenius(l) ** self.n
                acc = term if acc is None else acc * term
            self._Fprod[key] = acc
        return self._Fprod[key]

    def G(self, k: int) -> Series:
        """z-expansion of G_k, of order n - k"""
        if k not in self._G:
            m, j = self._split(k)
            s = self._g_series[j - 1].frobenius(m)
            self._G[k] = s if m == 0 else self.Fn_prod(0, m) * s
        return self._G[k]

    def H(self, k: int, m: int) -> Series:
        """z-expansion of H_k^(m), of order -(n + k); needs k <= (m + 1) n"""
        key = (k, m)
        if key not in self._H:
            i, j = self._split(k)
            if i > m:
                raise ValueError(f'H_{k} is not defined at twist {m}')
            s = self._h_series[j - 1].frobenius(m - i)
            self._H[key] = s if i == 0 else self.Fn_prod(m - i + 1, m + 1) * s
        return self._H[key]

    def _as_series(self, x):
        T, _ = self._frame
        if isinstance(x, Series):
            return x
        return Series.constant(x, len(T))

    # == t- and y-actions

    def peel_action(self, a: AElem):
        """Coefficient matrices A_0, A_1, ... of rho_a^(n) and the residual of the peel"""
        n = self.n
        T, Y = self._frame
        a_series = self._as_series(a(T, Y))
        d = a.deg
        blocks = {}
        worst = math.inf
        zero = self.tower.zero()
        for i in range(1, n + 1):
            r = a_series * self.G(i)
            ks = range(i + d, i - 1, -1)
            coeffs, _, res = _peel(r, ks, self.G, lambda k: n - k)
            worst = min(worst, res)
            for k, c in coeffs.items():
                blk, col = divmod(k - 1, n)
                blocks.setdefault(blk, matzero(n, n, zero))[i - 1][col] = c
        out = [blocks.get(b, matzero(n, n, zero)) for b in range(max(blocks) + 1)]
        logger.debug(f'rho^(n) of degree {d}: {len(out)} blocks, peel residual {worst}')
        return out, worst

    @cached_property
    def _rho_t(self):
        return self.peel_action(self.curve.t)

    @cached_property
    def _rho_y(self):
        return self.peel_action(self.curve.y)

    @property
    def rho_t(self) -> list:
        return self._rho_t[0]

    @property
    def rho_y(self) -> list:
        return self._rho_y[0]

    @property
    def d_theta(self) -> list:
        return self.rho_t[0]

    @property
    def E_theta(self) -> list:
        return self.rho_t[1]

    @property
    def d_eta(self) -> list:
        return self.rho_y[0]

    @cached_property
    def N(self) -> list:
        """Nilpotent part of d[theta]"""
        theta = self.curve.theta
        return [[c - theta if i == j else c for j, c in enumerate(row)] for i, row in enumerate(self.d_theta)]

    @cached_property
    def a(self) -> list:
        """a_1..a_n from the band of d[theta] and the last row of E_theta"""
        n = self.n
        D, E = self.d_theta, self.E_theta
        out = [D[i][i + 1] for i in range(n - 1)]
        out.append(E[n - 1][0] if n >= 2 else E[0][0])
        return out

    def three_term(self, k: int, m: int):
        """(theta', b', residual) with t H_k^(m) = theta' H_k^(m) + b' H_(k+1)^(m) + H_(k+2)^(m)"""
        key = (k, m)
        if key not in self._three:
            T, _ = self._frame
            r = T * self.H(k, m)
            n = self.n
            coeffs, _, res = _peel(r, [k + 2, k + 1, k], lambda K: self.H(K, m), lambda K: -(n + K))
            if (coeffs[k + 2] - 1).residual() < self.tol:
                raise IdentityResidual(f't H_{k} does not end in H_{k + 2} at twist {m}')
            self._three[key] = (coeffs[k], coeffs[k + 1], res)
        return self._three[key]

    def b_twisted(self, i: int, m: int | None = None) -> Scalar:
        """b_i^(m), read at twist level m >= (i + 1) // n"""
        m = (i + 1) // self.n if m is None else m
        return self.three_term(i, m)[1]

    @cached_property
    def b(self) -> list:
        out = []
        for i in range(1, self.n + 1):
            m = (i + 1) // self.n
            out.append(self.b_twisted(i, m).frobenius(-m))
        return out

    def d_action(self, a: AElem) -> list:
        """d[a] = r(d[theta]) + s(d[theta]) d[eta] for a = r(t) + s(t) y"""
        n = self.n
        tower = self.tower
        one, zero = tower.one(), tower.zero()
        D = self.d_theta

        def horner(poly):
            acc = matzero(n, n, zero)
            for c in poly.coeffs:
                acc = matadd(matprod(acc, D), matscale(matident(n, one, zero), tower.constant(c)))
            return acc
        out = horner(a.r)
        if a.s != 0:
            out = matadd(out, matprod(horner(a.s), self.d_eta))
        return out

    def rho_action(self, a: AElem) -> list:
        """rho_a^(n) by composing rho_t and rho_y"""
        n = self.n
        tower = self.tower
        one, zero = tower.one(), tower.zero()

        def horner(poly):
            acc = [matzero(n, n, zero)]
            for c in poly.coeffs:
                acc = _tw_add(_tw_mul(acc, self.rho_t), [matscale(matident(n, one, zero), tower.constant(c))])
            return acc
        out = horner(a.r)
        if a.s != 0:
            out = _tw_add(out, _tw_mul(horner(a.s), self.rho_y))
        return out

    def apply(self, P: list, x: list) -> list:
        return _tw_apply(P, x)

    def structure_checks(self) -> dict:
        """Residuals of the coefficient relations between the two bases and of the module axioms"""
        n = self.n
        out = {'peel_t': self._rho_t[1], 'peel_y': self._rho_y[1]}
        worst = math.inf
        for j in range(1, n):
            m = (n - j + 1) // n
            d = self.a[j - 1].frobenius(m) - self.b_twisted(n - j, m)
            worst = min(worst, _vector_residual(d, self.a[j - 1].frobenius(m)))
        out['a_j=b_(n-j)'] = worst
        m = (n + 1) // n
        an = self.a[n - 1].frobenius(m)
        out['a_n=b_n^q'] = _vector_residual(an - self.b_twisted(n, m + 1), an)
        Dt, Dy = self.d_theta, self.d_eta
        out['d[t]d[y]=d[y]d[t]'] = _vector_residual(matsub(matprod(Dt, Dy), matprod(Dy, Dt)), Dy)
        Nk = self.N
        for _ in range(n - 1):
            Nk = matprod(Nk, self.N)
        out['nilpotent'] = _vector_residual(Nk, self.d_theta)
        ty = _tw_mul(self.rho_t, self.rho_y)
        yt = _tw_mul(self.rho_y, self.rho_t)
        out['rho_t rho_y'] = min(_vector_residual(matsub(A, B), A) for A, B in zip(ty, yt))
        horner = self.rho_action(self.curve.y)
        out['rho_y composed'] = min(_vector_residual(matsub(A, B), A) for A, B in zip(horner, self.rho_y))
        return out

    # == expansions at Xi

    @cached_property
    def xi_chart(self):
        """Local chart at Xi, long enough for every function used in residues"""
        return local_chart(self.curve, self.curve.xi, self.xi_length + 2 * self.n + 4)

    @property
    def xi_length(self) -> int:
        return 2 * self.n + 10

    def at_xi(self, func) -> Series:
        return func.local(self.curve.xi, self.xi_length, self.xi_chart)

    @cached_property
    def lam(self) -> Series:
        """lambda / du at Xi"""
        ch = self.xi_chart
        return ch.dT / self.curve.lambda_den(ch.T, ch.Y)

    def f_at_xi_series(self, i: int) -> Series:
        """f^(i) near Xi as (y - eta^(i)) / (t - alpha^(i)) - m^(i) (1 + (alpha - theta)^(i) / (t - alpha^(i)))

        The t-terms of the line and of the pole meet only through the twisted
        difference (alpha - theta)^(i); alpha lies close to theta.
        """
        sh = self.module.shtuka
        ch = self.xi_chart
        C = self.curve
        pole = (ch.T - sh.alpha.frobenius(i)).inv()
        gap = (sh.alpha - C.theta).frobenius(i)
        return (ch.Y - C.eta.frobenius(i)) * pole - (pole * gap + 1) * sh.m.frobenius(i)


@dataclass
class ExpLogSeries:
    """Q_i and P_i of Exp and Log, with the convergence bound of Log"""

    module: TensorModule
    Q: list = field(default_factory=list)
    P: list = field(default_factory=list)
    log_bound: float | None = None

    @property
    def n(self) -> int:
        return self.module.n

    @property
    def imax(self) -> int:
        return len(self.Q) - 1

    def exp(self, z: list, imax: int | None = None) -> list:
        return exp_log_eval(self, z, 'exp', imax)

    def log(self, z: list, imax: int | None = None) -> list:
        return exp_log_eval(self, z, 'log', imax)


def exp_coeffs(tm: TensorModule, imax: int = 8) -> ExpLogSeries:
    """Q_0 = I and Q_i D^(i) - D Q_i = sum_{k>=1} A_k Q_(i-k)^(k), solved entrywise"""
    n = tm.n
    tower = tm.tower
    one, zero = tower.one(), tower.zero()
    rho = tm.rho_t
    theta = tm.curve.theta
    Nm = tm.N
    Q = [matident(n, one, zero)]
    for i in range(1, imax + 1):
        R = matzero(n, n, zero)
        for k in range(1, len(rho)):
            if i - k < 0:
                break
            R = matadd(R, matprod(rho[k], matfrob(Q[i - k], k)))
        gap = theta.frobenius(i) - theta
        if gap.is_zero():
            raise SylvesterSingular(f'theta^(q^{i}) - theta vanishes to precision')
        Ni = matfrob(Nm, i)
        X = matzero(n, n, zero)
        for j in range(n - 1, -1, -1):
            for k in range(n):
                acc = R[j][k]
                for l in range(k):
                    acc = acc - X[j][l] * Ni[l][k]
                for l in range(j + 1, n):
                    acc = acc + Nm[j][l] * X[l][k]
                X[j][k] = acc / gap
        Q.append(X)
    logger.debug(f'exp coefficients to Q_{imax} for n={n}')
    return ExpLogSeries(tm, Q)


def log_coeffs(series: ExpLogSeries, check: bool | None = None, depth: int = 4) -> ExpLogSeries:
    """P_i by inverting Exp; for n >= 2 also by residues at Xi, which must agree"""
    tm = series.module
    n = tm.n
    Q = series.Q
    P = [Q[0]]
    for i in range(1, len(Q)):
        acc = matzero(n, n, tm.tower.zero())
        for j in range(1, i + 1):
            acc = matadd(acc, matprod(Q[j], matfrob(P[i - j], j)))
        P.append(matscale(acc, -1))
    series.P = P
    series.log_bound = _log_bound(P, tm.q)
    check = n >= 2 if check is None else check
    if check:
        for i in range(min(depth, len(P) - 1) + 1):
            R = log_residue(tm, i)
            res = _vector_residual(matsub(R, P[i]), P[i])
            if res < tm.tol:
                raise ResidueMismatch(f'P_{i} by residues differs from the inverted series at {res}')
            bottom = log_bottom_row(tm, i)
            res = _vector_residual([a - b for a, b in zip(bottom, P[i][n - 1])], P[i][n - 1])
            if res < tm.tol:
                raise ResidueMismatch(f'bottom row of P_{i} differs from its value at Xi at {res}')
    return series


def _log_bound(P: list, q: int):
    bound = -math.inf
    for i, A in enumerate(P[1:], start=1):
        v = _valuation_floor(A)
        if v < math.inf:
            bound = max(bound, -v / q**i)
    return bound if bound > -math.inf else None


def log_residue(tm: TensorModule, i: int) -> list:
    """P_i[j][k] = Res_Xi(g_j h_(n-k+1)^(i) / (f f^(1) .. f^(i))^n lambda)"""
    n = tm.n
    den = None
    for l in range(i + 1):
        term = tm.f_at_xi_series(l) ** n
        den = term if den is None else den * term
    inv = den.inv() * tm.lam
    gs = [tm.at_xi(g) for g in tm.basis.g]
    hs = [tm.at_xi(h.frobenius(i)) for h in tm.basis.h]
    return [[(gs[j] * hs[n - k - 1] * inv).coeff(-1) for k in range(n)] for j in range(n)]


def log_bottom_row(tm: TensorModule, i: int) -> list:
    """h_(n-k+1)^(i)(Xi) / (h_1(Xi) prod_{l=1..i} f^(l)(Xi)^n)"""
    n = tm.n
    xi = tm.curve.xi
    den = tm.basis.h[0](xi)
    for l in range(1, i + 1):
        den = den * tm.module.f_at_xi(l) ** n
    return [tm.basis.h[n - k - 1].frobenius(i)(xi) / den for k in range(n)]


def exp_log_eval(series: ExpLogSeries, z: list, which: str = 'exp', imax: int | None = None) -> list:
    """sum C_i z^(i) for C = Q (exp) or P (log), stopped once terms are below precision"""
    coeffs = series.Q if which == 'exp' else series.P
    if which == 'log':
        if not series.P:
            raise ValueError('log coefficients have not been computed')
        vz = _valuation_floor(z)
        if series.log_bound is not None and vz <= series.log_bound:
            raise OutsideConvergenceRegion(f'v(z) = {vz} is not above the log bound {series.log_bound}')
    imax = len(coeffs) - 1 if imax is None else min(imax, len(coeffs) - 1)
    vz = _valuation_floor(z)
    if vz == math.inf:
        return list(z)
    target = vz + series.module.tower.N
    acc = list(z)
    quiet = 0
    for i in range(1, imax + 1):
        term = matvec(coeffs[i], [c.frobenius(i) for c in z])
        acc = [a + b for a, b in zip(acc, term)]
        quiet = quiet + 1 if residual_of(term) >= target else 0
        if quiet >= 2:
            return acc
    logger.debug(f'{which} used every coefficient to index {imax}')
    return acc


@dataclass
class TateVector:
    """n truncated t-series with scalar coefficients, and the tail rate that certifies them"""

    coords: list
    rate: float | None = None

    @property
    def n(self) -> int:
        return len(self.coords)

    @property
    def trunc(self) -> int:
        return self.coords[0].trunc

    def __getitem__(self, i):
        return self.coords[i]

    def __iter__(self):
        return iter(self.coords)

    def frobenius(self, k: int) -> 'TateVector':
        return TateVector([c.frobenius(k) for c in self.coords], self.rate)

    def __sub__(self, other):
        return TateVector([a - b for a, b in zip(self.coords, other.coords)])

    def __add__(self, other):
        return TateVector([a + b for a, b in zip(self.coords, other.coords)])

    def residual(self):
        return residual_of(list(self.coords))

    def at(self, t0) -> list:
        return [c(t0) for c in self.coords]

    def certify(self) -> 'TateVector':
        rates = [c.tail_rate() for c in self.coords]
        rates = [r for r in rates if r is not None]
        self.rate = min(rates) if rates else None
        if self.rate is not None and self.rate <= 0:
            raise TruncationTooSmall(f'tail valuations do not increase (rate {self.rate})')
        return self


class AndersonFunction:
    """E_u(t) = sum_i Exp(d[theta]^(-i-1) u) t^i, with its resolvent form

        E_u^(k)(t) = sum_j Q_j^(k) (d[theta]^(j+k) - t)^-1 u^(j+k)

    Coordinates past n read the twist: E_(n+c) = E_c^(1).
    """

    def __init__(self, series: ExpLogSeries, u: list):
        self.series = series
        self.tm = series.module
        self.u = list(u)
        self.n = self.tm.n
        self._coeffs = {}

    def __repr__(self):
        return f'AndersonFunction(n={self.n})'

    @cached_property
    def exp_u(self) -> list:
        return self.series.exp(self.u)

    def coefficients(self, trunc: int) -> TateVector:
        """The t-series to t^trunc"""
        if trunc in self._coeffs:
            return self._coeffs[trunc]
        tm = self.tm
        Dinv = gjinv(tm.d_theta)
        z = self.u
        cols = []
        for _ in range(trunc):
            z = matvec(Dinv, z)
            cols.append(self.series.exp(z))
        coords = [TPoly(tm.tower, [col[c] for col in cols], trunc) for c in range(self.n)]
        self._coeffs[trunc] = TateVector(coords).certify()
        return self._coeffs[trunc]

    def functional_residual(self, trunc: int) -> float:
        """rho_t(E) - t E - Exp(u), coefficientwise to t^trunc"""
        E = self.coefficients(trunc)
        tm = self.tm
        worst = math.inf
        for i in range(trunc - 1):
            col = [E[c].coeff(i) for c in range(self.n)]
            lhs = tm.apply(tm.rho_t, col)
            prev = [E[c].coeff(i - 1) for c in range(self.n)] if i else self.exp_u
            worst = min(worst, _vector_residual([a - b for a, b in zip(lhs, prev)], lhs))
        return worst

    def _terms(self, k: int):
        """(theta_(j+k), N_(j+k), w_0 .. w_(n-1)) with w_m = Q_j^(k) N^m u^(j+k), for each j"""
        theta = self.tm.curve.theta
        Q = self.series.Q
        for j in range(len(Q)):
            Qk = matfrob(Q[j], k)
            Nl = matfrob(self.tm.N, j + k)
            w = [c.frobenius(j + k) for c in self.u]
            ws = []
            for _ in range(self.n):
                ws.append(matvec(Qk, w))
                w = matvec(Nl, w)
            yield j, theta.frobenius(j + k), ws

    def at(self, t0, twist: int = 0, start: int = 0) -> list:
        """E^(twist)(t0) from the resolvent, the terms j < start left out"""
        acc = None
        ref = None
        quiet = 0
        for j, th, ws in self._terms(twist):
            if j < start:
                continue
            gap = th - t0
            if gap.is_zero():
                raise PoleAtTheta(f'resolvent term {j} has a pole at the evaluation point')
            inv = gap.inv()
            term = None
            p = inv
            for m, w in enumerate(ws):
                sgn = -1 if m % 2 else 1
                t = [c * p * sgn for c in w]
                term = t if term is None else [a + b for a, b in zip(term, t)]
                p = p * inv
            acc = term if acc is None else [a + b for a, b in zip(acc, term)]
            ref = _valuation_floor(acc) if ref is None else min(ref, _valuation_floor(acc))
            if ref < math.inf and residual_of(term) >= ref + self.tm.tower.N:
                quiet += 1
                if quiet >= 2:
                    break
            else:
                quiet = 0
        return acc

    def at_matrix(self, M: list, coord: int, twist: int = 0, start: int = 0) -> list:
        """E_coord^(twist)(M) for a square matrix M (coord is 1-based, extended past n)"""
        if coord > self.n:
            return self.at_matrix(M, coord - self.n, twist + 1, start)
        n = len(M)
        tower = self.tm.tower
        one, zero = tower.one(), tower.zero()
        acc = matzero(n, n, zero)
        ref = None
        quiet = 0
        for j, th, ws in self._terms(twist):
            if j < start:
                continue
            if j + twist == 0:
                raise PoleAtTheta('E_u has a pole at theta; leave out the j = 0 term')
            shifted = matsub(matscale(matident(n, one, zero), th), M)
            R = gjinv(shifted)
            Rp = R
            term = matzero(n, n, zero)
            for m, w in enumerate(ws):
                c = w[coord - 1] if m % 2 == 0 else -w[coord - 1]
                term = matadd(term, matscale(Rp, c))
                Rp = matprod(Rp, R)
            acc = matadd(acc, term)
            v = _valuation_floor(acc)
            ref = v if ref is None else min(ref, v)
            if ref < math.inf and residual_of(term) >= ref + tower.N:
                quiet += 1
                if quiet >= 2:
                    break
            else:
                quiet = 0
        return acc

    def coordinate_series(self, coord: int, trunc: int, twist: int = 0) -> TPoly:
        """Extended coordinate E_coord^(twist) as a t-series"""
        if coord > self.n:
            return self.coordinate_series(coord - self.n, trunc, twist + 1)
        return self.coefficients(trunc)[coord - 1].frobenius(twist)

    def res_theta(self) -> list:
        """Res_theta(E_u dt): only the j = 0 term has a pole at theta"""
        theta = self.tm.curve.theta
        out = [self.tm.tower.zero()] * self.n
        for j, th, ws in self._terms(0):
            if j > 0 and not (th - theta).is_zero():
                break
            out = [a - w for a, w in zip(out, ws[0])]
        return out

    def _polar_series(self, w: list, coord: int, like: Series) -> Series:
        """-sum_m (N^m w)_coord u^(-m-1) as a series in the local parameter at Xi"""
        n = self.n
        x = w
        vals = []
        for _ in range(n):
            vals.append(-x[coord - 1])
            x = matvec(self.tm.N, x)
        coeffs = list(reversed(vals))
        return Series(coeffs + [like.zero] * (len(like) - n), v=-n, zero=like.zero)

    def res_xi_G(self) -> list:
        """RES_Xi(G_u) with G_u = E_(d[eta] u) + (y + c1 t + c3) E_u, from the polar parts at Xi"""
        tm = self.tm
        C = tm.curve
        ch = tm.xi_chart
        lam = tm.lam
        eta_u = matvec(tm.d_eta, self.u)
        mult = ch.Y + ch.T * C.const(1, C.theta) + C.const(3, C.theta)
        out = []
        for c in range(1, self.n + 1):
            G = self._polar_series(eta_u, c, ch.T) + mult * self._polar_series(self.u, c, ch.T)
            out.append((G * lam).coeff(-1))
        return out


class Omega:
    """omega = xi^(1/(q-1)) prod_i xi^(q^i) / f^(i) near Xi, with omega^(1) = f omega"""

    def __init__(self, tm: TensorModule):
        self.tm = tm
        self.curve = tm.curve
        sh = tm.module.shtuka
        C = self.curve
        self.xi = (C.eta - sh.m * C.theta) / sh.alpha
        self.root, self.branch = self._root()
        q = C.q
        N = C.tower.N
        self.depth = 1
        while 2 * q**self.depth - 2 <= N + 4:
            self.depth += 1
        self.depth += 1

    def _root(self):
        q = self.curve.q
        x = self.xi
        try:
            root = x.nth_root(q - 1)
        except UnsupportedField:
            tower = x.tower.extend(q - 1)
            logger.debug(f'sign of xi needs F_(q^{tower.s}) for its {q - 1}-th root')
            root = x.lift(tower).nth_root(q - 1)
        return root, int(root.sgn()) if type(root.sgn()).degree == 1 else [int(c) for c in root.sgn().vector()]

    def __repr__(self):
        return f'Omega(depth={self.depth}, branch={self.branch})'

    def local(self, twist: int = 0) -> Series:
        """omega^(twist) near Xi"""
        tm = self.tm
        acc = None
        for i in range(twist, self.depth + twist + 1):
            fac = tm.f_at_xi_series(i).inv() * self.xi.frobenius(i)
            acc = fac if acc is None else acc * fac
        return acc * self.root.frobenius(twist)

    def functional_residual(self) -> float:
        tm = self.tm
        lhs = self.local(1)
        rhs = tm.f_at_xi_series(0) * self.local(0)
        d = lhs - rhs
        return _series_residual(d, [lhs, rhs])

    def check(self) -> 'Omega':
        res = self.functional_residual()
        if res < self.tm.tol:
            raise FunctionalEquationResidual(f'omega^(1) - f omega has relative residual {res}')
        return self


@dataclass
class PeriodData:
    """Pi_n = -RES_Xi(T(omega^n)), its companion d[eta] Pi_n, and p_n"""

    n: int
    Pi: list
    pi_rho: Scalar
    branch: object = None
    exp_residual: float | None = None

    @property
    def p_n(self) -> Scalar:
        return self.Pi[-1]

    def lattice(self, tm: TensorModule) -> list:
        return [self.Pi, matvec(tm.d_eta, self.Pi)]

    def to_json(self) -> dict:
        return {'n': self.n, 'Pi': [x.to_json() for x in self.Pi], 'pi_rho': self.pi_rho.to_json(),
                'branch': self.branch, 'exp_residual': str(self.exp_residual)}


def basis_functions(module: DrinfeldModule, n: int) -> BasisFunctions:
    return BasisFunctions(module, n)


def module_matrices(module: DrinfeldModule, n: int, length: int | None = None) -> TensorModule:
    return TensorModule(module, n, length)


def _periods(tm: TensorModule, omega: Omega) -> list:
    n = tm.n
    w = omega.local() ** n * tm.lam
    return [-(tm.at_xi(g) * w).coeff(-1) for g in tm.basis.g]


def omega_and_periods(module: DrinfeldModule, n: int, imax: int = 8, check: bool = True) -> dict:
    """{'omega', 'periods': PeriodData, 'module': TensorModule, 'series': ExpLogSeries}"""
    tm = module if isinstance(module, TensorModule) else TensorModule(module, n)
    base = tm if tm.n == 1 else TensorModule(tm.module, 1)
    omega = Omega(base)
    if check:
        omega.check()
    pi = _periods(base, omega)[0]
    Pi = [pi] if tm.n == 1 else _periods(tm, Omega(tm))
    series = exp_coeffs(tm, imax)
    res = _vector_residual(series.exp(Pi), Pi)
    if check and res < tm.tol // 2:
        raise FunctionalEquationResidual(f'Exp(Pi_{tm.n}) is not zero to precision ({res})')
    data = PeriodData(tm.n, Pi, pi, omega.branch, res)
    logger.debug(f'Pi_{tm.n} at branch {tm.module.shtuka.branch!r}: Exp residual {res}')
    return {'omega': omega, 'periods': data, 'module': tm, 'series': series}


def anderson_gen(series: ExpLogSeries, u: list) -> AndersonFunction:
    return AndersonFunction(series, u)


def _coords(tm: TensorModule, vec: list) -> list:
    """Coordinates on (h_n, .., h_1) from coordinates on (h_1, .., h_n)"""
    return list(reversed(vec))


def delta_matrix(tm: TensorModule) -> list:
    """t on the sigma^0 part of the h-basis: M[k][k] = theta, M[k][k-1] = b_(k-1), M[k][k-2] = 1"""
    n = tm.n
    tower = tm.tower
    one, zero = tower.one(), tower.zero()
    M = matzero(n, n, zero)
    for k in range(n):
        M[k][k] = tm.curve.theta
        if k >= 1:
            M[k][k - 1] = tm.b[k - 1]
        if k >= 2:
            M[k][k - 2] = one
    return M


def delta0(tm: TensorModule, W1: list, W2: list | None) -> list:
    """delta_0(w1 h1 + w2 h2) from the matrices W1 = w1(M), W2 = w2(M)"""
    n = tm.n
    one, zero = tm.tower.one(), tm.tower.zero()
    e1 = [one] + [zero] * (n - 1)
    vec = matvec(W1, e1)
    if n >= 2 and W2 is not None:
        e2 = [zero, one] + [zero] * (n - 2)
        vec = [a + b for a, b in zip(vec, matvec(W2, e2))]
    return _coords(tm, vec)


def delta1(tm: TensorModule, w1: TPoly, w2: TPoly, m: int | None = None) -> list:
    """delta_1(w1 h1 + w2 h2) for polynomial w1, w2: sum of the sigma-coefficients b_i"""
    n = tm.n
    deg = max(w1.degree, w2.degree, 0)
    top = 2 * deg + 2
    m = (top - 1) // n if m is None else m
    T, _ = tm._frame
    z = tm._as_series(w1.frobenius(m)(T)) * tm.H(1, m) + tm._as_series(w2.frobenius(m)(T)) * tm.H(2, m)
    return _delta1_series(tm, z, top, m)


def _delta1_series(tm: TensorModule, z: Series, top: int, m: int) -> list:
    n = tm.n
    coeffs, _, res = _peel(z, range(top, 0, -1), lambda K: tm.H(K, m), lambda K: -(n + K))
    if res < tm.tol:
        raise ExpansionDivergence(f'sigma-expansion leaves a remainder at relative valuation {res}')
    zero = tm.tower.zero()
    out = [zero] * n
    for K, c in coeffs.items():
        i, j = divmod(K - 1, n)
        # c = b_(j, i)^(m - i); its i-th twist is b^(m)
        out[n - 1 - j] = out[n - 1 - j] + c.frobenius(i)
    return [x.frobenius(-m) if m else x for x in out]


def delta_maps(tm: TensorModule, w1: TPoly, w2: TPoly) -> dict:
    """{'delta0', 'delta1'} of w1 h1 + w2 h2 with polynomial coefficients"""
    M = delta_matrix(tm)
    return {'delta0': delta0(tm, poly_at_matrix(w1, M), poly_at_matrix(w2, M)),
            'delta1': delta1(tm, w1, w2)}


def sigma_minus_one_delta1(tm: TensorModule, x: TPoly, j: int = 1) -> list:
    """delta_1((sigma - 1)(x h_j)) from ((sigma - 1) x h_j)^(m) = (f^(m))^n (x h_j)^(m-1) - (x h_j)^(m)"""
    T, _ = tm._frame
    n = tm.n
    top = n + 2 * max(x.degree, 0) + j
    m = max(1, (top - 1) // n)
    prev = tm._as_series(x.frobenius(m - 1)(T)) * tm.H(j, m - 1)
    cur = tm._as_series(x.frobenius(m)(T)) * tm.H(j, m)
    z = tm.F.frobenius(m) ** n * prev - cur
    return _delta1_series(tm, z, top, m)


def structure_helems(field: HilbertField, n: int) -> dict:
    """{'a': [HElem], 'b': [HElem]} across the branches of H"""
    mods = [TensorModule(M, n) for M in field.modules]
    return {'a': [HElem(tm.a[i] for tm in mods) for i in range(n)],
            'b': [HElem(tm.b[i] for tm in mods) for i in range(n)]}


def period_ratio(field: HilbertField, n: int, den_degree: int = 6):
    """p_n / pi_rho^n recognized in K (h = 1) or in H through its conjugates"""
    ratios = []
    for M in field.modules:
        data = omega_and_periods(M, n)['periods']
        ratios.append(data.p_n / data.pi_rho ** n)
    if field.h == 1:
        return recognize_K(ratios[0], field.curve, den_degree)
    return recognize_H(ratios, field.generator.images, field.curve, den_degree)


if __name__ == '__main__':
    __import__('doctest').testmod(optionflags=4 | 8 | 32)
