"""Ideals of A = F_q[t, y] as F_q[t]-lattices.

An integral ideal is stored in Hermite form

    I = span_{F_q[t]} { a(t), b(t) + c(t) y },     c | a, c | b, deg b < deg a

so that I = c * (a', b' + y) with a = a' c, b = b' c. Then deg I = deg a + deg c
and I is closed under y exactly when a' | F - b'^2 + (c1 t + c3) b'. Fractional
ideals carry a denominator in F_q[t].

The class of I in Cl(A) = X(F_q) is the sum of the points (r, -b'(r)) over
the roots r of a' (each Frobenius orbit sums to an F_q-point); the c part is
principal.
"""
import itertools
import logging
from functools import cached_property

import galois
import numpy as np

from gzl.curveutils import AElem, Curve, KElem, PointX
from gzl.exception import CutoffExceeded, FactorizationIncomplete, ZeroIdeal
from gzl.fieldutils import all_polys, descend, finite_field, fq_null_space, monic_polys
from gzl.fieldutils import subfield_embedding, to_ints
from gzl.scalarutils import Scalar, unit_root

logger = logging.getLogger(__name__)

__all__ = [
    'IdealA',
    'IdealClass',
    'ideal_ops',
    'prime_ideal',
    'enumerate_ideals',
    'enumerate_ideals_hnf',
    'class_and_generator',
    'goss_bracket',
    'quotient_size',
]


def _monic(p: galois.Poly) -> galois.Poly:
    if p == 0:
        return p
    return p * (p.coeffs[0] ** -1)


def _rows(curve: Curve, g: AElem):
    """F_q[t]-coordinates (r, s) of g and of y*g"""
    yg = g * curve.y
    return [(g.r, g.s), (yg.r, yg.s)]


def _hermite(curve: Curve, rows):
    """(a, b, c) spanning the same F_q[t]-module as the rows (r, s)"""
    zero = curve.poly([0])
    pivot = None
    rest = []
    for r, s in rows:
        if s == 0:
            if r != 0:
                rest.append(r)
            continue
        if pivot is None:
            pivot = (r, s)
            continue
        pr, ps = pivot
        d, u, v = galois.egcd(ps, s)
        rest.append((s // d) * pr - (ps // d) * r)
        pivot = (u * pr + v * r, d)
    a = zero
    for r in rest:
        a = galois.gcd(a, r) if a != 0 else _monic(r)
    if pivot is None or a == 0:
        raise ZeroIdeal('generators do not span a rank-2 lattice')
    b, c = pivot
    inv = c.coeffs[0] ** -1
    b, c = b * inv, c * inv
    a = _monic(a)
    return a, b % a, c


class IdealA:
    """Fractional ideal (1/denom) * span{a, b + c y}

    >>> from gzl.curveutils import CurveParams
    >>> from gzl.fieldutils import FqConfig
    >>> C = Curve(CurveParams(FqConfig(3), (0, 0, 0, -1, 1)))
    >>> P = prime_ideal(C, C.point(0, 1))
    >>> P.degree, P.contains(C.t), P.contains(C.y)
    (1, True, False)
    >>> (P * P.conj()) == IdealA.principal(C, C.t)
    True
    """

    def __init__(self, curve: Curve, a, b, c, denom=None, meta=None):
        self.curve = curve
        denom = curve.poly([1]) if denom is None else denom
        g = galois.gcd(c, denom)
        if g.degree > 0:
            a, b, c, denom = a // g, b // g, c // g, denom // g
        self.a, self.b, self.c = a, b, c
        self.denom = _monic(denom)
        self.meta = meta or {}

    @classmethod
    def from_generators(cls, curve: Curve, gens, meta=None) -> 'IdealA':
        """Ideal generated by elements of A (or K: KElem generators share a denominator)"""
        denom = curve.poly([1])
        elems = []
        for g in gens:
            if isinstance(g, KElem):
                denom = denom * g.den // galois.gcd(denom, g.den)
        for g in gens:
            if isinstance(g, KElem):
                scale = denom // g.den
                g = g.num * curve.aelem(scale, 0)
            elif isinstance(g, int):
                g = curve.aelem(g, 0)
            if not g.is_zero():
                elems.append(g)
        if not elems:
            raise ZeroIdeal('ideal generated by zero')
        rows = [row for g in elems for row in _rows(curve, g)]
        a, b, c = _hermite(curve, rows)
        return cls(curve, a, b, c, denom, meta)

    @classmethod
    def principal(cls, curve: Curve, x) -> 'IdealA':
        return cls.from_generators(curve, [x], meta={'generator': x})

    @classmethod
    def unit(cls, curve: Curve) -> 'IdealA':
        return cls.principal(curve, curve.one)

    # == inspection

    @property
    def is_integral(self) -> bool:
        return self.denom.degree == 0

    @property
    def degree(self) -> int:
        """deg a + deg c - 2 deg denom"""
        return self.a.degree + self.c.degree - 2 * self.denom.degree

    @property
    def norm(self) -> galois.Poly:
        """a * c: generates N(I) in F_q[t] (integral part)"""
        return self.a * self.c

    @property
    def a_prime(self) -> galois.Poly:
        return self.a // self.c

    @property
    def b_prime(self) -> galois.Poly:
        return self.b // self.c

    def basis(self):
        """The two F_q[t]-basis elements of the integral part"""
        C = self.curve
        return [C.aelem(self.a, 0), C.aelem(self.b, self.c)]

    def is_ideal(self) -> bool:
        """Closure under y"""
        C = self.curve
        ap, bp = self.a_prime, self.b_prime
        return (self.a % self.c == 0 and self.b % self.c == 0
                and (C.F_poly - bp * bp + C.L_poly * bp) % ap == 0)

    def contains(self, x) -> bool:
        """x in I, i.e. denom * x lies in the integral part"""
        C = self.curve
        if isinstance(x, KElem):
            num = x.num * C.aelem(self.denom, 0)
            if num.r % x.den != 0 or num.s % x.den != 0:
                return False
            x = C.aelem(num.r // x.den, num.s // x.den)
        else:
            x = x * C.aelem(self.denom, 0)
        s_quo, s_rem = divmod(x.s, self.c)
        return s_rem == 0 and (x.r - s_quo * self.b) % self.a == 0

    def remainder(self, x: AElem):
        """Linear map A -> F_q^(deg c + deg a) whose kernel is the integral part"""
        s_quo, s_rem = divmod(x.s, self.c)
        r_rem = (x.r - s_quo * self.b) % self.a
        return _coeff_vec(s_rem, self.c.degree) + _coeff_vec(r_rem, self.a.degree)

    def __eq__(self, other):
        if not isinstance(other, IdealA):
            return NotImplemented
        return (self.a, self.b, self.c, self.denom) == (other.a, other.b, other.c, other.denom)

    def __hash__(self):
        return hash(tuple(tuple(to_ints(p.coeffs)) for p in (self.a, self.b, self.c, self.denom)))

    def __repr__(self):
        text = f'IdealA(a={to_ints(self.a.coeffs)}, b={to_ints(self.b.coeffs)}, c={to_ints(self.c.coeffs)}'
        if not self.is_integral:
            text += f', denom={to_ints(self.denom.coeffs)}'
        return text + ')'

    def to_json(self) -> dict:
        return {name: to_ints(getattr(self, name).coeffs[::-1]) for name in ('a', 'b', 'c', 'denom')}

    # == arithmetic

    def __mul__(self, other: 'IdealA') -> 'IdealA':
        gens = [x * y for x in self.basis() for y in other.basis()]
        J = IdealA.from_generators(self.curve, gens)
        J = IdealA(self.curve, J.a, J.b, J.c, self.denom * other.denom)
        gx, gy = self.meta.get('generator'), other.meta.get('generator')
        if gx is not None and gy is not None:
            J.meta['generator'] = gx * gy
        return J

    def __pow__(self, k: int) -> 'IdealA':
        if k < 0:
            return self.inverse() ** (-k)
        result = IdealA.unit(self.curve)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def conj(self) -> 'IdealA':
        """Image under y -> -y - c1 t - c3"""
        J = IdealA.from_generators(self.curve, [g.conj() for g in self.basis()])
        return IdealA(self.curve, J.a, J.b, J.c, self.denom)

    def inverse(self) -> 'IdealA':
        """conj(I) / N(I); the denominator of I moves to the numerator"""
        J = self.conj()
        num = IdealA.from_generators(self.curve, [g * self.curve.aelem(self.denom, 0) for g in J.basis()])
        return IdealA(self.curve, num.a, num.b, num.c, self.norm)

    @cached_property
    def points(self) -> list:
        """(point, multiplicity) over the roots of a', points in extension fields"""
        C = self.curve
        ap, bp = self.a_prime, self.b_prime
        if ap.degree == 0:
            return []
        factors, mults = ap.factors()
        out = []
        for f, e in zip(factors, mults):
            k = f.degree
            big = finite_field(C.fq.p, C.fq.r * k)
            emb = subfield_embedding(C.F, big)
            fk = galois.Poly(emb(f.coeffs), field=big)
            roots = fk.roots()
            if len(roots) == 0:
                raise FactorizationIncomplete(f'no root of {f} in F_(q^{k})')
            r = big(min(to_ints(roots)))
            bk = galois.Poly(emb(bp.coeffs), field=big)
            out.append((PointX(r, -bk(r)), e, k))
        return out


def _coeff_vec(p: galois.Poly, n: int) -> list:
    asc = to_ints(p.coeffs[::-1]) if p != 0 else []
    return (asc + [0] * n)[:n]


class IdealClass:
    """Class of an ideal, represented by a point of X(F_q)"""

    __slots__ = ('point',)

    def __init__(self, point: PointX):
        self.point = point

    def __eq__(self, other):
        return isinstance(other, IdealClass) and self.point == other.point

    def __hash__(self):
        return hash(self.point)

    def __repr__(self):
        return f'IdealClass({self.point!r})'

    @property
    def is_trivial(self) -> bool:
        return self.point.is_inf


def prime_ideal(curve: Curve, P: PointX) -> IdealA:
    """(t - x(P), y - y(P)) for an affine F_q-point P"""
    gens = [curve.t - curve.aelem(P.x, 0), curve.y - curve.aelem(P.y, 0)]
    return IdealA.from_generators(curve, gens, meta={'class': P})


def ideal_class(I: IdealA) -> IdealClass:
    """Sum of the points of a' (with multiplicity); denominators are principal"""
    C = I.curve
    if 'class' in I.meta:
        return IdealClass(I.meta['class'])
    acc = PointX.inf()
    for P, e, k in I.points:
        orbit = PointX.inf()
        Q = P
        for _ in range(k):
            orbit = C.add(orbit, Q)
            Q = C.frobenius(Q, 1)
        if not orbit.is_inf:
            orbit = PointX(descend(orbit.x, C.F), descend(orbit.y, C.F))
        acc = C.add(acc, C.mul(e, orbit))
    return IdealClass(acc)


def _generator(I: IdealA):
    """x with I = xA and sgn(x) = 1, or None"""
    C = I.curve
    d = I.a.degree + I.c.degree
    degrees = C.degrees(d)
    cols = [I.remainder(C.monomial(k)) for k in degrees]
    n = len(cols[0]) if cols else 0
    if n == 0:
        return C.one
    rows = [[cols[j][i] for j in range(len(degrees))] for i in range(n)]
    kernel = fq_null_space(rows, C.F)
    for vec in kernel:
        x = C.from_monomials({k: c for k, c in zip(degrees, vec) if c})
        if x.deg == d:
            return x.monic()
    return None


def class_and_generator(I: IdealA) -> dict:
    """{'class': IdealClass, 'principal': bool, 'generator': AElem or KElem or None}"""
    if isinstance(I, LazyIdeal):
        principal = I.point is None
        return {'class': I.cls, 'principal': principal, 'generator': I.x if principal else None}
    C = I.curve
    cls = ideal_class(I)
    if not cls.is_trivial:
        return {'class': cls, 'principal': False, 'generator': None}
    gen = I.meta.get('generator')
    if gen is None:
        gen = _generator(IdealA(C, I.a, I.b, I.c))
        if gen is None:
            raise FactorizationIncomplete(f'{I!r} has trivial class but no generator of degree {I.degree}')
        if not I.is_integral:
            gen = KElem(C, gen, I.denom)
    elif isinstance(gen, KElem):
        gen = KElem(C, gen.num.monic(), gen.den)
    else:
        gen = gen.monic()
    return {'class': cls, 'principal': True, 'generator': gen}


def quotient_size(I: IdealA) -> int:
    """|A/I| counted as the rank of the remainder map on a large monomial span"""
    C = I.curve
    span = C.degrees(2 * (I.a.degree + I.c.degree) + 4)
    rows = [I.remainder(C.monomial(k)) for k in span]
    if not rows or not rows[0]:
        return 1
    mat = C.F(np.array(rows, dtype=np.int64))
    return C.q ** int(np.linalg.matrix_rank(mat))


def ideal_ops(I: IdealA, J: IdealA | None = None, op: str = 'mul', x=None):
    """Dispatch form of from_generators, mul, norm, degree, membership"""
    if op == 'from_generators':
        return IdealA.from_generators(I.curve if isinstance(I, IdealA) else I, x)
    if op == 'mul':
        return I * J
    if op == 'norm':
        return I.norm
    if op == 'degree':
        return I.degree
    if op == 'membership':
        return I.contains(x)
    raise ValueError(f'unknown ideal operation {op}')


# == enumeration

def _principal_of_degree(curve: Curve, d: int):
    """Monic x of degree d: m_d plus any combination of lower monomials"""
    if d == 0:
        yield curve.one
        return
    if d == 1:
        return
    lower = curve.degrees(d - 1)
    lead = curve.monomial(d)
    basis = [curve.monomial(k) for k in lower]
    for coeffs in itertools.product(range(curve.q), repeat=len(lower)):
        x = lead
        for c, m in zip(coeffs, basis):
            if c:
                x = x + m * curve.F(c)
        yield x


def _in_prime_of_degree(curve: Curve, Q: PointX, d: int):
    """Monic x of degree d vanishing at Q"""
    if d < 2:
        return
    F = curve.F
    lower = [k for k in curve.degrees(d - 1) if k != 0]
    lead = curve.monomial(d)
    basis = [curve.monomial(k) for k in lower]
    vals = [m.at(Q) for m in basis]
    lead_val = lead.at(Q)
    for coeffs in itertools.product(range(curve.q), repeat=len(lower)):
        x = lead
        acc = lead_val
        for c, m, v in zip(coeffs, basis, vals):
            if c:
                x = x + m * F(c)
                acc = acc + F(c) * v
        yield x - curve.aelem(acc, 0) if int(acc) else x


def enumerate_ideals(curve: Curve, d: int, cutoff: int | None = None) -> list:
    """All integral ideals of degree d, each once, in a deterministic order.

    Ideals of the trivial class are xA with x monic of degree d; ideals in
    the class of a point Q are x * P_Q / (t - x(Q)) with x monic of degree
    d + 1 vanishing at -Q. Each ideal carries its class and the factor
    a_I = x / (t - x(Q)) with I = a_I * P_Q in `meta`.
    """
    if d < 0:
        return []
    if cutoff is not None and d > cutoff:
        raise CutoffExceeded(f'degree {d} is beyond the cutoff {cutoff}')
    C = curve
    out = []
    for x in _principal_of_degree(C, d):
        out.append(LazyIdeal(C, x, None))
    for Q in C.rational_points()[1:]:
        nQ = C.neg(Q)
        for x in _in_prime_of_degree(C, nQ, d + 1):
            out.append(LazyIdeal(C, x, Q))
    logger.debug(f'{len(out)} ideals of degree {d}')
    return out


class LazyIdeal:
    """Ideal known through its enumeration data; Hermite form computed on demand"""

    def __init__(self, curve, x: AElem, point):
        self.curve = curve
        self.x = x
        self.point = point

    @property
    def cls(self) -> IdealClass:
        return IdealClass(self.point if self.point is not None else PointX.inf())

    @property
    def degree(self) -> int:
        return self.x.deg - (0 if self.point is None else 1)

    @cached_property
    def a_factor(self) -> KElem:
        """a_I with I = a_I * P_Q (I = xA for the trivial class)"""
        if self.point is None:
            return KElem(self.curve, self.x)
        C = self.curve
        return KElem(C, self.x, galois.Poly.Roots([int(self.point.x)], field=C.F))

    @cached_property
    def ideal(self) -> IdealA:
        C = self.curve
        if self.point is None:
            return IdealA.principal(C, self.x)
        P = prime_ideal(C, self.point)
        gens = [self.a_factor * KElem(C, g) for g in P.basis()]
        J = IdealA.from_generators(C, gens)
        J.meta['class'] = self.point
        return J

    def __repr__(self):
        return f'LazyIdeal(deg={self.degree}, class={self.cls.point!r}, x={self.x!r})'


def enumerate_ideals_hnf(curve: Curve, d: int) -> list:
    """Integral ideals of degree d by scanning Hermite forms (independent count)"""
    C = curve
    F = C.F
    out = []
    for dc in range(d // 2 + 1):
        da = d - 2 * dc
        for c in monic_polys(F, dc):
            for ap in monic_polys(F, da):
                for bp in all_polys(F, da):
                    if (C.F_poly - bp * bp + C.L_poly * bp) % ap == 0:
                        out.append(IdealA(C, ap * c, bp * c, c))
    return out


# == Goss map

def goss_bracket(I, h: int | None = None) -> Scalar:
    """[I]_A = <I> pi^(-deg I) with <I> = <x>^(1/h) where I^h = xA.

    For an enumerated ideal I = a_I P_Q this is a_I [P_Q]_A.
    """
    if isinstance(I, LazyIdeal):
        C = I.curve
        head = I.a_factor.embed_infinity()
        if I.point is None:
            return head
        return head * goss_bracket(prime_ideal(C, I.point), h)
    C = I.curve
    res = class_and_generator(I)
    if res['principal']:
        gen = res['generator']
        val = gen.embed_infinity() if isinstance(gen, KElem) else C.embed_infinity(gen)
        return val / C.tower.constant(val.sgn())
    h = h or C.class_number
    J = IdealA(C, I.a, I.b, I.c)
    x = class_and_generator(J ** h)['generator']
    bracket = unit_root(C.embed_infinity(x).one_unit(), h) * C.tower.monomial(1, -J.degree)
    if not I.is_integral:
        bracket = bracket / C.embed_infinity(C.aelem(I.denom, 0))
    return bracket


if __name__ == '__main__':
    __import__('doctest').testmod(optionflags=4 | 8 | 32)
