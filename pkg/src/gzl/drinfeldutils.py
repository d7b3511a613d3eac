"""The sign-normalized Drinfeld module of the curve and its Hilbert class field.

The Drinfeld divisor V lies in the formal group at infinity and solves
V = Xi + V^(1); it is the limit of Xi + Xi^(1) + Xi^(2) + ... under the group
law. Every V_R = V + R with R in X(F_q) solves the same equation, and the
h = |X(F_q)| choices are the conjugate embeddings of H into K_inf. An
element of H is stored as its h images, one per branch, in the order of
:meth:`gzl.curveutils.Curve.rational_points`.

The shtuka function f = (y - eta - m (t - theta)) / (t - t(V)) determines
rho: writing a = sum_i rho_{a,i} g_i with g_i = f f^(1) ... f^(i-1), the
value at Xi^(j) is triangular in the coefficients because g_i vanishes at
Xi, ..., Xi^(i-1).
"""
import logging
from dataclasses import dataclass
from functools import cached_property

from gzl.curveutils import AElem, Curve, KElem, PointX
from gzl.divisorutils import Divisor, RationalFunc
from gzl.exception import AmbiguousFrobenius, FormalGroupDivergence
from gzl.exception import NewtonDivergence, NotRecognized, RecognitionFailure
from gzl.idealutils import IdealA, LazyIdeal, class_and_generator, ideal_class
from gzl.idealutils import prime_ideal
from gzl.recogutils import is_integral, recognize_H
from gzl.scalarutils import Scalar
from gzl.seriesutils import residual_of
from gzl.skewutils import SkewPoly, gcrd

logger = logging.getLogger(__name__)

GCRD_LIFT = 2

__all__ = [
    'HElem',
    'ShtukaData',
    'DrinfeldModule',
    'HilbertField',
    'formal_divisor',
    'build_shtuka',
    'solve_drinfeld',
    'drinfeld_divisor_shtuka',
    'rho_map',
    'psi_ideal',
    'galois_action',
]


class HElem:
    """Element of H as its images under the h embeddings

    No polynomial form in a primitive element is kept; exact forms come
    from recognition of the images (:func:`gzl.recogutils.recognize_H`).

    >>> from gzl.fieldutils import FqConfig
    >>> from gzl.scalarutils import Tower
    >>> T = Tower(FqConfig(3), N=10)
    >>> x = HElem([T.one(), T.uniformizer()])
    >>> (x * x - x ** 2).is_zero()
    True
    >>> x.norm() == T.uniformizer()
    True
    """

    __slots__ = ('images',)
    __array_ufunc__ = None

    def __init__(self, images):
        self.images = tuple(images)

    @classmethod
    def constant(cls, c, h: int):
        return cls([c] * h)

    @property
    def tower(self):
        return self.images[0].tower

    def __len__(self):
        return len(self.images)

    def __getitem__(self, i):
        return self.images[i]

    def __iter__(self):
        return iter(self.images)

    def __repr__(self):
        return f'HElem(h={len(self.images)}, v={[str(x.residual()) for x in self.images]})'

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self.images)

    def residual(self):
        return residual_of(list(self.images))

    def valuations(self) -> list:
        return [x.valuation() for x in self.images]

    def _other(self, other):
        if isinstance(other, HElem):
            return other.images
        if isinstance(other, (Scalar, int)) or hasattr(other, 'dtype'):
            return (other,) * len(self.images)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return HElem(a + b for a, b in zip(self.images, o))

    __radd__ = __add__

    def __neg__(self):
        return HElem(-a for a in self.images)

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return HElem(a - b for a, b in zip(self.images, o))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return HElem(a * b for a, b in zip(self.images, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return HElem(a / b for a, b in zip(self.images, o))

    def __rtruediv__(self, other):
        return self.inv() * other

    def inv(self) -> 'HElem':
        return HElem(a.inv() for a in self.images)

    def __pow__(self, k: int):
        return HElem(a ** k for a in self.images)

    def __eq__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return all((a - b).is_zero() for a, b in zip(self.images, o))

    __hash__ = None

    def frobenius(self, k: int) -> 'HElem':
        return HElem(a.frobenius(k) for a in self.images)

    def norm(self) -> Scalar:
        acc = self.images[0]
        for a in self.images[1:]:
            acc = acc * a
        return acc

    def trace(self) -> Scalar:
        acc = self.images[0]
        for a in self.images[1:]:
            acc = acc + a
        return acc

    def permute(self, perm) -> 'HElem':
        """(sigma x)_R = x_perm[R]"""
        return HElem(self.images[j] for j in perm)

    def to_json(self) -> list:
        return [x.to_json() for x in self.images]


@dataclass
class ShtukaData:
    """V, its twist, the slope m through Xi and V^(1), alpha = t(V), and f = nu / delta"""

    branch: PointX
    V: PointX
    V1: PointX
    m: Scalar
    alpha: Scalar
    nu: RationalFunc
    delta: RationalFunc
    f: RationalFunc

    def expected_divisor(self, curve: Curve) -> Divisor:
        return Divisor([(curve.xi, 1), (self.V1, 1), (self.V, -1), (PointX.inf(), -1)])

    def to_json(self) -> dict:
        return {
            'branch': repr(self.branch),
            'V': {'x': self.V.x.to_json(), 'y': self.V.y.to_json()},
            'm': self.m.to_json(),
            'alpha': self.alpha.to_json(),
        }


def formal_divisor(curve: Curve, max_steps: int | None = None) -> PointX:
    """V with V = Xi + V^(1), by iterating the map in the formal group at infinity"""
    xi = curve.xi
    V = xi
    steps = max_steps or curve.tower.N.bit_length() + 8
    for step in range(steps):
        nxt = curve.add(xi, curve.frobenius(V, 1))
        if nxt == V:
            logger.debug(f'Drinfeld divisor settled after {step} steps')
            return nxt
        V = nxt
    raise FormalGroupDivergence(f'V = Xi + V^(1) did not settle in {steps} steps')


def build_shtuka(curve: Curve, V0: PointX, R: PointX) -> ShtukaData:
    """Shtuka data of the branch V_R = V0 + R"""
    V = curve.add(V0, R) if not R.is_inf else V0
    V1 = curve.frobenius(V, 1)
    xi = curve.xi
    nu = RationalFunc.line(curve, xi, V1)
    delta = RationalFunc.t_minus(curve, V)
    f = nu / delta
    m = (V1.y - xi.y) / (V1.x - xi.x)
    return ShtukaData(R, V, V1, m, V.x, nu, delta, f)


def _xi_twists(curve: Curve, n: int) -> list:
    xi = curve.xi
    return [PointX(xi.x.frobenius(j), xi.y.frobenius(j)) if j else xi for j in range(n)]


class DrinfeldModule:
    """rho: A -> H{tau} at one embedding of H

    rho_t = theta + x1 tau + tau^2 and rho_y = eta + y1 tau + y2 tau^2 + tau^3.
    """

    def __init__(self, curve: Curve, shtuka: ShtukaData):
        self.curve = curve
        self.shtuka = shtuka
        self.q = curve.q
        self._f_at = {}
        self._lifts = {}
        self.rho_t = self._solve(curve.t)
        self.rho_y = self._solve(curve.y)

    def __repr__(self):
        return f'DrinfeldModule(q={self.q}, branch={self.shtuka.branch!r})'

    @property
    def f(self) -> RationalFunc:
        return self.shtuka.f

    @property
    def x1(self) -> Scalar:
        return self.rho_t.coeffs[1]

    def f_at_xi(self, j: int) -> Scalar:
        """f(Xi^(j))"""
        if j not in self._f_at:
            self._f_at[j] = self.f(_xi_twists(self.curve, j + 1)[j])
        return self._f_at[j]

    def g_at_xi(self, i: int, j: int) -> Scalar:
        """g_i(Xi^(j)) = prod_{k<i} f(Xi^(j-k))^(q^k)"""
        acc = self.curve.tower.one()
        for k in range(i):
            acc = acc * self.f_at_xi(j - k).frobenius(k)
        return acc

    def _solve(self, a: AElem) -> SkewPoly:
        """Coefficients of rho_a from a(Xi^(j)) = sum_{i<=j} rho_{a,i} g_i(Xi^(j))"""
        C = self.curve
        d = a.deg
        ia = C.embed_infinity(a)
        coeffs = []
        for j in range(d):
            acc = ia.frobenius(j)
            for i, c in enumerate(coeffs):
                if i:
                    acc = acc - c * self.g_at_xi(i, j)
                else:
                    acc = acc - c
            coeffs.append(acc / self.g_at_xi(j, j) if j else acc)
        coeffs.append(C.tower.constant(C.F(a.sgn)))
        return SkewPoly(coeffs, self.q)

    def rho(self, a) -> SkewPoly:
        """rho_a from rho_t, rho_y along a = r(t) + s(t) y"""
        C = self.curve
        if isinstance(a, int):
            a = C.aelem(a, 0)
        one = SkewPoly([C.tower.one()], self.q)

        def horner(poly):
            acc = SkewPoly([C.tower.zero()], self.q)
            for c in poly.coeffs:
                acc = acc * self.rho_t + one * C.tower.constant(c)
            return acc
        out = horner(a.r)
        if a.s != 0:
            out = out + horner(a.s) * self.rho_y
        return out

    def psi_prime(self, Q: PointX) -> Scalar:
        """psi of the prime ideal of an affine F_q-point: -f(Q)"""
        return -self.f(Q)

    def psi(self, I) -> Scalar:
        """psi(I) = a_I psi(P_Q) for I = a_I P_Q in the class of Q (a_I = x/sgn(x) if principal)"""
        C = self.curve
        a_I, Q = _class_factor(I)
        val = a_I.embed_infinity() if isinstance(a_I, KElem) else C.embed_infinity(a_I)
        if Q is None:
            return val
        return val * self.psi_prime(Q)

    def lifted(self, prec: int) -> 'DrinfeldModule':
        """The same branch rebuilt with relative precision `prec`"""
        if prec == self.curve.tower.N:
            return self
        if prec not in self._lifts:
            C = Curve(self.curve.params, self.curve.tower.with_precision(prec))
            self._lifts[prec] = DrinfeldModule(C, build_shtuka(C, formal_divisor(C), self.shtuka.branch))
            logger.debug(f'rebuilt {self!r} at precision {prec}')
        return self._lifts[prec]

    def rho_ideal(self, I) -> SkewPoly:
        """Monic right gcd of rho over the two lattice generators of an integral ideal

        The Euclidean steps cancel terms of large absolute value, so the gcd
        is taken on the module lifted to GCRD_LIFT * N and read back at N.
        """
        if isinstance(I, LazyIdeal):
            I = I.ideal
        g1, g2 = I.basis()
        tower = self.curve.tower
        lifted = self.lifted(GCRD_LIFT * tower.N)
        out = gcrd(lifted.rho(g1), lifted.rho(g2))
        return out.map(lambda c: Scalar(tower, c.coeffs, v=c.v, e=c.e, absprec=c.absprec))

    def hayes_x1(self, psi: Scalar) -> Scalar:
        """x1 of P * rho for a prime P with rho_P = psi + tau"""
        C = self.curve
        theta = C.theta
        return (psi * self.x1 + theta.frobenius(1) - theta) / psi.frobenius(1)

    def identity_residuals(self) -> dict:
        """Residuals of rho_t rho_y = rho_y rho_t and of the Weierstrass relation"""
        C = self.curve
        T, Y = self.rho_t, self.rho_y
        comm = T * Y - Y * T
        cs = [C.tower.constant(C.F(c)) for c in C.params.c]
        c1, c2, c3, c4, c6 = cs
        lhs = Y * Y + (T * Y) * c1 + Y * c3
        rhs = T * T * T + (T * T) * c2 + T * c4 + SkewPoly([c6], self.q)
        return {'commute': comm.residual(), 'weierstrass': (lhs - rhs).residual()}


def _class_factor(I):
    """(a_I, Q) with I = a_I P_Q, Q = None for a principal ideal"""
    if isinstance(I, LazyIdeal):
        return (I.a_factor, I.point)
    res = class_and_generator(I)
    if res['principal']:
        gen = res['generator']
        return gen, None
    C = I.curve
    Q = res['class'].point
    J = I * prime_ideal(C, Q).inverse()
    gen = class_and_generator(J)['generator']
    return gen, Q


class HilbertField:
    """H = K(x1) through its h embeddings, with the Galois table"""

    def __init__(self, curve: Curve, modules: list):
        self.curve = curve
        self.modules = modules
        self.branches = [M.shtuka.branch for M in modules]

    @property
    def h(self) -> int:
        return len(self.modules)

    def __repr__(self):
        return f'HilbertField(h={self.h})'

    def helem(self, func) -> HElem:
        return HElem(func(M) for M in self.modules)

    def embed(self, x) -> HElem:
        C = self.curve
        if isinstance(x, AElem):
            x = C.embed_infinity(x)
        elif isinstance(x, KElem):
            x = x.embed_infinity()
        elif not isinstance(x, Scalar):
            x = C.tower.constant(x)
        return HElem.constant(x, self.h)

    @cached_property
    def generator(self) -> HElem:
        """w = x1"""
        return self.helem(lambda M: M.x1)

    @cached_property
    def integral_generators(self) -> dict:
        return {'x1': self.generator, 'y1': self.helem(lambda M: M.rho_y.coeffs[1]),
                'y2': self.helem(lambda M: M.rho_y.coeffs[2])}

    @cached_property
    def min_poly(self) -> list:
        """m(w) = prod_R (w - x1_R) with coefficients in A, ascending"""
        try:
            return is_integral(self.generator.images, self.curve)
        except NotRecognized as exc:
            raise RecognitionFailure(f'minimal polynomial of x1 not certified: {exc}') from exc

    def coordinates(self, x: HElem, den_degree: int = 6) -> list:
        """c_k in K with x = sum c_k w^k"""
        return recognize_H(x.images, self.generator.images, self.curve, den_degree)

    def certify_integral(self, x: HElem) -> list:
        return is_integral(x.images, self.curve)

    def psi(self, I) -> HElem:
        return self.helem(lambda M: M.psi(I))

    def psi_by_gcrd(self, I) -> HElem:
        return self.helem(lambda M: M.rho_ideal(I).coeffs[0])

    @cached_property
    def galois_table(self) -> dict:
        """Q -> S with (sigma_{P_Q} x)_R = x_{R + S}, for every affine F_q-point Q

        sigma_P is read off the twist P * rho = sigma_P(rho) at the degree-one
        primes.
        """
        C = self.curve
        x1 = self.generator
        tol = C.tower.N // 2
        table = {}
        for Q in C.rational_points()[1:]:
            shifts = None
            for r, M in enumerate(self.modules):
                target = M.hayes_x1(M.psi_prime(Q))
                R = self.branches[r]
                hits = [s for s, S in enumerate(self.branches)
                        if (target - x1[self._index(C.add(R, S))]).residual() >= tol]
                if len(hits) != 1:
                    raise AmbiguousFrobenius(f'{len(hits)} branches match the Hayes twist by {Q!r} at {R!r}')
                shifts = hits if shifts is None else shifts
                if shifts != hits:
                    raise AmbiguousFrobenius(f'Hayes twist by {Q!r} is not a translation of branches')
            table[Q] = self.branches[shifts[0]]
            logger.debug(f'sigma of the prime at {Q!r} shifts branches by {table[Q]!r}')
        return table

    def _index(self, P: PointX) -> int:
        return self.curve.point_index(P)

    def shift_of(self, sigma) -> PointX:
        """Branch shift of a group element: a shift point, an ideal, or an ideal class"""
        if isinstance(sigma, PointX):
            return sigma
        if isinstance(sigma, (IdealA, LazyIdeal)):
            cls = sigma.cls if isinstance(sigma, LazyIdeal) else ideal_class(sigma)
            return self.class_shift(cls.point)
        if hasattr(sigma, 'point'):
            return self.class_shift(sigma.point)
        raise TypeError(f'not a Galois element: {sigma!r}')

    def class_shift(self, Q: PointX) -> PointX:
        """Shift of sigma for the class of Q, extended additively from the primes"""
        if Q.is_inf:
            return Q
        return self.galois_table[Q]

    def permutation(self, S: PointX) -> list:
        C = self.curve
        return [self._index(C.add(R, S)) for R in self.branches]

    def act(self, sigma, x: HElem) -> HElem:
        return x.permute(self.permutation(self.shift_of(sigma)))

    def galois_checks(self) -> dict:
        """Homomorphism and bijectivity of class -> shift, and sigma order = class order"""
        C = self.curve
        pts = C.rational_points()
        shifts = {P: self.class_shift(P) for P in pts}
        hom = all(shifts[C.add(P, Q)] == C.add(shifts[P], shifts[Q]) for P in pts for Q in pts)
        bij = len({C.point_index(S) for S in shifts.values()}) == len(pts)
        orders = all(C.order(shifts[P]) == C.order(P) for P in pts)
        return {'homomorphism': hom, 'bijective': bij, 'orders': orders}


def solve_drinfeld(curve: Curve, prec: int | None = None):
    """(module at the distinguished branch V, HilbertField over all branches)

    V comes from the contraction V -> Xi + V^(1) in the formal group rather
    than a Newton step on the coordinates. Each pass twists the error, so
    the settled digits grow geometrically; a stalled iteration is reported
    as NewtonDivergence.
    """
    if prec is not None and prec != curve.tower.N:
        curve = Curve(curve.params, curve.tower.with_precision(prec))
    try:
        V0 = formal_divisor(curve)
    except FormalGroupDivergence as exc:
        raise NewtonDivergence(str(exc)) from exc
    modules = [DrinfeldModule(curve, build_shtuka(curve, V0, R)) for R in curve.rational_points()]
    field = HilbertField(curve, modules)
    logger.debug(f'Drinfeld module on {len(modules)} branches')
    return modules[0], field


def drinfeld_divisor_shtuka(module: DrinfeldModule, check: bool = True) -> ShtukaData:
    """Shtuka data of the module, validated: V - V^(1) = Xi and the divisor of f"""
    sh = module.shtuka
    C = module.curve
    if check:
        if not (C.sub(sh.V, sh.V1) == C.xi):
            raise FormalGroupDivergence('V - V^(1) is not Xi to precision')
        if sh.f.divisor() != sh.expected_divisor(C):
            raise FormalGroupDivergence('divisor of the shtuka function is not (Xi) + (V1) - (V) - (inf)')
        if not (sh.f.sgn() - 1).is_zero():
            raise FormalGroupDivergence('shtuka function is not sign-normalized')
    return sh


def rho_map(module: DrinfeldModule, a) -> SkewPoly:
    return module.rho(a)


def psi_ideal(module: DrinfeldModule, I) -> dict:
    """{'rho_I': monic right gcd, 'psi': its constant term}"""
    rho_I = module.rho_ideal(I)
    return {'rho_I': rho_I, 'psi': rho_I.coeffs[0]}


def galois_action(field: HilbertField, sigma, x: HElem) -> HElem:
    return field.act(sigma, x)


if __name__ == '__main__':
    __import__('doctest').testmod(optionflags=4 | 8 | 32)
