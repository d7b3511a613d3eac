"""Rational functions on X, divisors, local expansions, residues and L(D).

A :class:`RationalFunc` is (p0(t) + p1(t) y) / d(t) with scalar
coefficients. Local behaviour is read off a :class:`LocalChart`: the local
parameter u is t - t(P) at an ordinary affine point, y - y(P) at a 2-torsion
point and z = t/y at infinity. Riemann-Roch spaces come from linear algebra
on the monomial span of A.
"""
import logging
from dataclasses import dataclass

from gzl.curveutils import AElem, Curve, KElem, PointX, lift_to
from gzl.exception import DivisorIncomplete, PoleAtPoint, PrecisionExhausted
from gzl.exception import SingularLinearSystem
from gzl.matrixutils import null_space
from gzl.scalarutils import Scalar
from gzl.seriesutils import Series, TPoly, is_zero

logger = logging.getLogger(__name__)

__all__ = [
    'Divisor',
    'LocalChart',
    'RationalFunc',
    'local_chart',
    'func_ops',
    'rr_space',
    'principal_test',
]


class Divisor:
    """Formal sum of points; equal points are merged

    >>> from gzl.curveutils import CurveParams
    >>> from gzl.fieldutils import FqConfig
    >>> C = Curve(CurveParams(FqConfig(3), (0, 0, 0, -1, 1)))
    >>> P = C.point(0, 1)
    >>> D = Divisor([(P, 1), (C.neg(P), 1), (PointX.inf(), -2)])
    >>> D.degree, D.is_principal(C)
    (0, True)
    """

    __slots__ = ('terms',)

    def __init__(self, terms=()):
        merged = []
        for P, m in terms:
            for i, (Q, k) in enumerate(merged):
                if Q == P:
                    merged[i] = (Q, k + m)
                    break
            else:
                merged.append((P, m))
        self.terms = [(P, m) for P, m in merged if m != 0]

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.terms)

    def mult(self, P: PointX) -> int:
        for Q, m in self.terms:
            if Q == P:
                return m
        return 0

    @property
    def support(self) -> list:
        return [P for P, _ in self.terms]

    def __add__(self, other):
        return Divisor(self.terms + other.terms)

    def __neg__(self):
        return Divisor([(P, -m) for P, m in self.terms])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k: int):
        return Divisor([(P, k * m) for P, m in self.terms])

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Divisor):
            return NotImplemented
        return not (self - other).terms

    __hash__ = None

    def __repr__(self):
        return 'Divisor(' + ' + '.join(f'{m}*{P!r}' for P, m in self.terms) + ')'

    def point_sum(self, curve: Curve) -> PointX:
        return curve.point_sum(self.terms)

    def is_principal(self, curve: Curve) -> bool:
        return self.degree == 0 and self.point_sum(curve).is_inf


@dataclass
class LocalChart:
    """Coordinates T, Y and dT/du as series in the local parameter u at P"""

    point: PointX
    T: Series
    Y: Series
    dT: Series
    kind: str

    @property
    def length(self) -> int:
        return len(self.T)


def _solve_branch(G, dG, start: Series, length: int) -> Series:
    """Newton iteration for the root of G with the given constant term"""
    X = start
    for _ in range(length.bit_length() + 1):
        X = X - G(X) * dG(X).inv()
    return X


def local_chart(curve: Curve, P: PointX, length: int) -> LocalChart:
    """Local coordinates at P to `length` terms (relative)"""
    tower = curve.tower
    one = tower.one()
    zero = tower.zero()
    if P.is_inf:
        T, Y = curve.infinity_series(length + 3, like=one)
        return LocalChart(P, T, Y, T.derivative(), 'inf')
    x0 = lift_to(P.x, one)
    y0 = lift_to(P.y, one)
    u = Series([zero, one] + [zero] * (length - 2), v=0, zero=zero)
    if curve.is_two_torsion(P):
        Y = Series.constant(y0, length) + u
        start = Series.constant(x0, length)

        def G(X):
            return curve.equation(X, Y)

        def dG(X):
            return Y * curve.const(1, one) - (X * X * 3 + X * curve.const(2, one) * 2 + curve.const(4, one))
        T = _solve_branch(G, dG, start, length)
        return LocalChart(P, T, Y, T.derivative(), 'two-torsion')
    T = Series.constant(x0, length) + u
    start = Series.constant(y0, length)

    def G(Yv):
        return curve.equation(T, Yv)

    def dG(Yv):
        return curve.lambda_den(T, Yv)
    Y = _solve_branch(G, dG, start, length)
    dT = Series.constant(one, length)
    return LocalChart(P, T, Y, dT, 'ordinary')


class RationalFunc:
    """(p0(t) + p1(t) y) / d(t) with scalar coefficients.

    `hints` lists points where the function may have zeros or poles; they
    are carried through products and used by :meth:`divisor`.
    """

    __slots__ = ('curve', 'p0', 'p1', 'den', 'hints')

    def __init__(self, curve: Curve, p0: TPoly, p1: TPoly | None = None, den: TPoly | None = None,
                 hints=()):
        tower = curve.tower
        self.curve = curve
        self.p0 = p0
        self.p1 = p1 if p1 is not None else TPoly(tower, [])
        self.den = den if den is not None else TPoly(tower, [1])
        self.hints = tuple(hints)

    # == constructors

    @classmethod
    def constant(cls, curve, c):
        return cls(curve, TPoly(curve.tower, [c]))

    @classmethod
    def from_aelem(cls, curve, a: AElem):
        T = curve.tower
        return cls(curve, TPoly.from_poly(T, a.r), TPoly.from_poly(T, a.s))

    @classmethod
    def from_kelem(cls, curve, x: KElem):
        T = curve.tower
        return cls(curve, TPoly.from_poly(T, x.num.r), TPoly.from_poly(T, x.num.s),
                   TPoly.from_poly(T, x.den))

    @classmethod
    def t_minus(cls, curve, P: PointX):
        """t - t(P), vanishing at P and -P"""
        c = lift_to(P.x, curve.tower.one())
        return cls(curve, TPoly.linear(curve.tower, -c), hints=(P, curve.neg(P)))

    @classmethod
    def line(cls, curve, P: PointX, Q: PointX):
        """y - y(P) - m (t - t(P)) through P and Q (tangent when P = Q)"""
        R = curve.add(P, Q)
        one = curve.tower.one()
        x1, y1 = lift_to(P.x, one), lift_to(P.y, one)
        x2, y2 = lift_to(Q.x, one), lift_to(Q.y, one)
        if is_zero(x1 - x2):
            m = (x1 * x1 * 3 + x1 * curve.const(2, one) * 2 + curve.const(4, one) - y1 * curve.const(1, one)) \
                / curve.lambda_den(x1, y1)
        else:
            m = (y2 - y1) / (x2 - x1)
        T = curve.tower
        p0 = TPoly(T, [m * x1 - y1, -m])
        return cls(curve, p0, TPoly(T, [1]), hints=(P, Q, curve.neg(R)))

    # == arithmetic

    def _tp(self, poly):
        return TPoly.from_poly(self.curve.tower, poly)

    def __mul__(self, other):
        if isinstance(other, (Scalar, int)):
            return RationalFunc(self.curve, self.p0 * other, self.p1 * other, self.den, self.hints)
        if isinstance(other, AElem):
            other = RationalFunc.from_aelem(self.curve, other)
        if not isinstance(other, RationalFunc):
            return NotImplemented
        C = self.curve
        F, L = self._tp(C.F_poly), self._tp(C.L_poly)
        q11 = self.p1 * other.p1
        p0 = self.p0 * other.p0 + q11 * F
        p1 = self.p0 * other.p1 + self.p1 * other.p0 - q11 * L
        return RationalFunc(C, p0, p1, self.den * other.den, self.hints + other.hints)

    __rmul__ = __mul__

    def __add__(self, other):
        if isinstance(other, (Scalar, int)):
            other = RationalFunc.constant(self.curve, other)
        if isinstance(other, AElem):
            other = RationalFunc.from_aelem(self.curve, other)
        if not isinstance(other, RationalFunc):
            return NotImplemented
        return RationalFunc(self.curve, self.p0 * other.den + other.p0 * self.den,
                            self.p1 * other.den + other.p1 * self.den, self.den * other.den,
                            self.hints + other.hints)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunc(self.curve, -self.p0, -self.p1, self.den, self.hints)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def inv(self) -> 'RationalFunc':
        C = self.curve
        F, L = self._tp(C.F_poly), self._tp(C.L_poly)
        norm = self.p0 * self.p0 - self.p0 * self.p1 * L - self.p1 * self.p1 * F
        return RationalFunc(C, (self.p0 - self.p1 * L) * self.den, -self.p1 * self.den, norm, self.hints)

    def __truediv__(self, other):
        if isinstance(other, (Scalar, int)):
            return self * (self.curve.tower.one() / other)
        if isinstance(other, AElem):
            other = RationalFunc.from_aelem(self.curve, other)
        return self * other.inv()

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        result = RationalFunc.constant(self.curve, 1)
        for _ in range(k):
            result = result * self
        return result

    def frobenius(self, k: int) -> 'RationalFunc':
        """Coefficients raised to q^k; zeros and poles move to their twists"""
        C = self.curve
        return RationalFunc(C, self.p0.frobenius(k), self.p1.frobenius(k), self.den.frobenius(k),
                            tuple(C.frobenius(P, k) for P in self.hints))

    def with_hints(self, *points) -> 'RationalFunc':
        return RationalFunc(self.curve, self.p0, self.p1, self.den, self.hints + points)

    def residual(self):
        return min(self.p0.residual(), self.p1.residual())

    def __repr__(self):
        return f'RationalFunc(deg p0={self.p0.degree}, deg p1={self.p1.degree}, deg d={self.den.degree})'

    # == evaluation and expansion

    def on_series(self, T: Series, Y: Series) -> Series:
        num = self.p0(T) + self.p1(T) * Y
        den = self.den(T)
        if not isinstance(den, Series):
            return num * (self.curve.tower.one() / den)
        return num / den

    def _num_bound(self) -> int:
        return max(2 * self.p0.degree, 2 * self.p1.degree + 3, 0)

    def local(self, P: PointX, length: int, chart: LocalChart | None = None) -> Series:
        """Expansion at P, known at least through u^(length - 1)"""
        mult = 2 if (not P.is_inf and self.curve.is_two_torsion(P)) else 1
        if P.is_inf:
            pad = 2 * (self._num_bound() + 2 * max(self.den.degree, 0)) + 6
        else:
            pad = 2 * mult * max(self.den.degree, 0) + 2
        L = length + pad
        if chart is None or chart.length < L:
            chart = local_chart(self.curve, P, L)
        return self.on_series(chart.T, chart.Y)

    def order_at(self, P: PointX, length: int = 8) -> int:
        k = self.local(P, length).order()
        if k is None:
            raise PrecisionExhausted(f'function vanishes to the known precision at {P!r}')
        return k

    def __call__(self, P: PointX):
        """Value at P; raises PoleAtPoint at a pole"""
        if not P.is_inf:
            one = self.curve.tower.one()
            x, y = lift_to(P.x, one), lift_to(P.y, one)
            d = self.den(x)
            if not d.is_zero():
                return (self.p0(x) + self.p1(x) * y) / d
        s = self.local(P, 1)
        k = s.order()
        if k is not None and k < 0:
            raise PoleAtPoint(f'pole of order {-k} at {P!r}')
        return s.coeff(0)

    def expand_infinity(self, length: int = 6) -> Series:
        """Series in z = t/y at infinity"""
        return self.local(PointX.inf(), length)

    def sgn(self) -> Scalar:
        """Leading z-coefficient at infinity"""
        return self.expand_infinity(2).leading()

    def pole_order_inf(self) -> int:
        return -self.expand_infinity(2).order()

    def residue_at(self, P: PointX, length: int = 4) -> Scalar:
        """Coefficient of u^-1 in g * lambda / du, lambda = dt/(2y + c1 t + c3)"""
        mult = 2 if (not P.is_inf and self.curve.is_two_torsion(P)) else 1
        chart = local_chart(self.curve, P, length + 2 * mult * max(self.den.degree, 0) + 8)
        g = self.local(P, length, chart)
        omega = chart.dT / self.curve.lambda_den(chart.T, chart.Y)
        return (g * omega).coeff(-1)

    def divisor(self, extra=()) -> Divisor:
        """Divisor from the orders at the hint points, `extra` points and infinity"""
        terms = []
        for P in list(self.hints) + list(extra):
            if P.is_inf or any(Q == P for Q, _ in terms):
                continue
            k = self.order_at(P)
            if k:
                terms.append((P, k))
        terms.append((PointX.inf(), self.local(PointX.inf(), 2).order()))
        D = Divisor(terms)
        if D.degree != 0:
            raise DivisorIncomplete(f'known zeros and poles give degree {D.degree}')
        return D


def func_ops(g: RationalFunc, op: str, P: PointX | None = None, k: int = 4, extra=()):
    """Dispatch form of evaluate, local_expand, residue_at, divisor_of"""
    if op == 'evaluate':
        return g(P)
    if op == 'local_expand':
        return g.local(P, k)
    if op == 'residue_at':
        return g.residue_at(P)
    if op == 'divisor_of':
        return g.divisor(extra)
    raise ValueError(f'unknown function operation {op}')


def _zero_order(curve, P: PointX, R: PointX) -> int:
    """Order at R of t - t(P)"""
    if P.is_inf or R.is_inf:
        return 0
    if is_zero(lift_to(P.x, curve.tower.one()) - lift_to(R.x, curve.tower.one())):
        return 2 if curve.is_two_torsion(R) else 1
    return 0


def rr_space(curve: Curve, D: Divisor) -> list:
    """Basis of L(D) = {g : div(g) >= -D}, each element with sgn~ = 1.

    The basis is ordered by pole order at infinity of the leading monomial.

    >>> from gzl.curveutils import CurveParams
    >>> from gzl.fieldutils import FqConfig
    >>> from gzl.scalarutils import Tower
    >>> C = Curve(CurveParams(FqConfig(3), (0, 0, 0, -1, 1)), Tower(FqConfig(3), N=20))
    >>> len(rr_space(C, Divisor([(PointX.inf(), 3)])))
    3
    >>> len(rr_space(C, Divisor()))
    1
    """
    tower = curve.tower
    one = tower.one()
    m_inf = D.mult(PointX.inf())
    affine = [(P, m) for P, m in D.terms if not P.is_inf]
    positive = [(P, m) for P, m in affine if m > 0]
    bound = m_inf + 2 * sum(m for _, m in positive)
    if bound < 0:
        return []
    den = TPoly(tower, [1])
    for P, m in positive:
        den = den * TPoly.linear(tower, -lift_to(P.x, one)) ** m
    points = [P for P, _ in affine]
    for P, _ in positive:
        nP = curve.neg(P)
        if not any(nP == Q for Q in points):
            points.append(nP)
    degrees = curve.degrees(bound)
    rows = []
    for R in points:
        need = sum(m * _zero_order(curve, P, R) for P, m in positive) - D.mult(R)
        if need <= 0:
            continue
        chart = local_chart(curve, R, need + 2)
        cols = [_monomial_series(curve, d, chart) for d in degrees]
        for k in range(need):
            rows.append([s.coeff(k) for s in cols])
    if rows:
        basis, pivots = null_space(rows, len(degrees))
    else:
        basis = [[one if i == j else tower.zero() for i in range(len(degrees))] for j in range(len(degrees))]
    expected = D.degree if D.degree > 0 else (1 if D.degree == 0 and D.is_principal(curve) else 0)
    if len(basis) != expected:
        raise SingularLinearSystem(f'L(D) came out with dimension {len(basis)}, expected {expected}')
    hints = tuple(points) + (PointX.inf(),)
    out = []
    for vec in basis:
        p0 = TPoly(tower, [vec[degrees.index(2 * i)] if 2 * i in degrees else tower.zero()
                           for i in range(bound // 2 + 1)])
        p1 = TPoly(tower, [vec[degrees.index(2 * i + 3)] if 2 * i + 3 in degrees else tower.zero()
                           for i in range(max(0, (bound - 3) // 2 + 1))])
        out.append(RationalFunc(curve, p0, p1, den, hints))
    logger.debug(f'L(D) of degree {D.degree}: {len(out)} functions on monomials up to {bound}')
    return out


def _monomial_series(curve, d: int, chart: LocalChart) -> Series:
    T, Y = chart.T, chart.Y
    if d == 0:
        return Series.constant(curve.tower.one(), len(T))
    k = d // 2 if d % 2 == 0 else (d - 3) // 2
    acc = Series.constant(curve.tower.one(), len(T))
    for _ in range(k):
        acc = acc * T
    return acc if d % 2 == 0 else acc * Y


def principal_test(curve: Curve, D: Divisor) -> dict:
    """{'is_principal': bool, 'witness': RationalFunc or None}"""
    if not D.is_principal(curve):
        return {'is_principal': False, 'witness': None}
    witness = rr_space(curve, -D)[0]
    return {'is_principal': True, 'witness': witness}


if __name__ == '__main__':
    __import__('doctest').testmod(optionflags=4 | 8 | 32)
