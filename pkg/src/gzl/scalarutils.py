"""Truncated Laurent series in a ramified tower over K_inf = F_q((pi)).

A :class:`Scalar` is a value

    sum_j coeffs[j] * pi^((v + j)/e)      known modulo pi^(absprec/e)

with coefficients in F_{q^s}. `absprec` is ``None`` for exact (finite)
values. The index `e` is kept as small as the value allows and operands are
aligned to the lcm of their indices, which represents the same numbers as
one global tower F_{q^s}((pi^(1/((q-1) q^M)))) without storing its zeros.
"""
import logging
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import cached_property

import galois
import numpy as np

from gzl.exception import DivisionByApparentZero, NotOneUnit
from gzl.exception import PrecisionExhausted, RamificationOverflow
from gzl.exception import UnsupportedField
from gzl.fieldutils import FqConfig, fq_nth_root, fq_pth_root, fq_qth_root
from gzl.fieldutils import series_inverse, series_mul, subfield_embedding
from gzl.fieldutils import to_ints

logger = logging.getLogger(__name__)

__all__ = [
    'Tower',
    'Scalar',
    'unit_root',
    'scalar_arith',
    'frobenius',
]


def _p_part(n: int, p: int) -> int:
    part = 1
    while n % p == 0:
        n //= p
        part *= p
    return part


@dataclass(frozen=True)
class Tower:
    """Ambient field configuration for scalars.

    `N` caps the relative precision (in pi units), `M` is the configured
    wild ramification exponent and `M_cap` the hard limit it may grow to.

    >>> T = Tower(FqConfig(3), N=10)
    >>> T.q, T.field.order
    (3, 3)
    >>> T.check_ramification(2 * 9)
    >>> T.check_ramification(4)
    Traceback (most recent call last):
     ...
    gzl.exception.RamificationOverflow: index 4 needs a tame part dividing q-1=2
    """

    fq: FqConfig
    N: int = 160
    M: int = 2
    M_cap: int = 8

    @property
    def p(self) -> int:
        return self.fq.p

    @property
    def q(self) -> int:
        return self.fq.q

    @property
    def s(self) -> int:
        return self.fq.s

    @cached_property
    def field(self):
        return self.fq.fqs

    def check_ramification(self, e: int):
        wild = _p_part(e, self.p)
        tame = e // wild
        if (self.q - 1) % tame:
            raise RamificationOverflow(f'index {e} needs a tame part dividing q-1={self.q - 1}')
        if wild > self.q**self.M_cap:
            raise RamificationOverflow(f'index {e} exceeds q^{self.M_cap}')
        if wild > self.q**self.M:
            logger.debug(f'ramification bumped past q^{self.M} to index {e}')

    def extend(self, s: int) -> 'Tower':
        """Tower whose residue field is F_{q^s'} with s' = lcm(self.s, s)"""
        s2 = math.lcm(self.s, s)
        if s2 == self.s:
            return self
        return replace(self, fq=self.fq.extend(s2))

    def with_precision(self, N: int) -> 'Tower':
        return replace(self, N=N)

    def common(self, other: 'Tower') -> 'Tower':
        if self == other:
            return self
        if (self.p, self.fq.r) != (other.p, other.fq.r):
            raise UnsupportedField('scalars over different base fields')
        return replace(self.extend(other.s), N=max(self.N, other.N),
                       M=max(self.M, other.M), M_cap=max(self.M_cap, other.M_cap))

    # == constructors

    def zero(self, absprec=None, e=1) -> 'Scalar':
        return Scalar(self, self.field.Zeros(0), v=absprec or 0, e=e, absprec=absprec)

    def one(self) -> 'Scalar':
        return self.constant(1)

    def constant(self, c) -> 'Scalar':
        """Exact constant from an int (read in the prime field) or a field element"""
        return Scalar(self, self.element(c).reshape(1), v=0, e=1)

    def element(self, c):
        field = self.field
        if isinstance(c, galois.FieldArray):
            if type(c) is field:
                return c
            return subfield_embedding(type(c), field)(c)
        return field(int(c) % self.p)

    def uniformizer(self, e: int = 1) -> 'Scalar':
        """pi^(1/e)"""
        return self.monomial(1, 1, e)

    def monomial(self, c, k: int, e: int = 1) -> 'Scalar':
        """c * pi^(k/e)"""
        return Scalar(self, self.element(c).reshape(1), v=k, e=e)

    def series(self, coeffs, v: int = 0, e: int = 1, absprec=None) -> 'Scalar':
        """Scalar from coefficients (ints or field array) starting at pi^(v/e)"""
        arr = coeffs if isinstance(coeffs, galois.FieldArray) else self.field(
            [int(c) % self.p if self.field.degree == 1 else int(c) for c in coeffs])
        if type(arr) is not self.field:
            arr = subfield_embedding(type(arr), self.field)(arr)
        return Scalar(self, arr, v=v, e=e, absprec=absprec)


class Scalar:
    """Element of the tower with explicit precision.

    >>> T = Tower(FqConfig(3), N=8)
    >>> pi = T.uniformizer()
    >>> x = (T.one() - pi).inv()
    >>> x
    Scalar(e=1, v=0, prec=8, [1, 1, 1, 1, 1, 1, 1, 1])
    >>> (x * (T.one() - pi) - 1).residual()
    Fraction(8, 1)
    >>> (pi + 0) == pi
    True
    """

    __slots__ = ('tower', 'coeffs', 'v', 'e', 'absprec')
    __hash__ = None

    def __init__(self, tower: Tower, coeffs, v: int = 0, e: int = 1, absprec=None):
        field = tower.field
        coeffs = coeffs if isinstance(coeffs, galois.FieldArray) else field(list(coeffs))
        coeffs = coeffs.reshape(-1)
        ints = coeffs.view(np.ndarray)
        nz = np.flatnonzero(ints)
        self.tower = tower
        if len(nz) == 0 or (absprec is not None and absprec <= v + int(nz[0])):
            self.coeffs = field.Zeros(0)
            self.e = e
            self.absprec = absprec
            self.v = absprec if absprec is not None else 0
            return
        first = int(nz[0])
        v += first
        coeffs = coeffs[first:]
        cap = tower.N * e
        if absprec is None:
            coeffs = coeffs[:int(nz[-1]) - first + 1]
            if len(coeffs) > cap:
                absprec = v + cap
                coeffs = coeffs[:cap]
        else:
            absprec = min(absprec, v + cap)
            length = absprec - v
            if len(coeffs) >= length:
                coeffs = coeffs[:length]
            else:
                padded = field.Zeros(length)
                padded[:len(coeffs)] = coeffs
                coeffs = padded
        g = math.gcd(e, v)
        if g > 1:
            idx = np.flatnonzero(coeffs.view(np.ndarray))
            g = math.gcd(g, *[int(i) for i in idx])
        if g > 1:
            coeffs = coeffs[::g]
            v //= g
            e //= g
            if absprec is not None:
                absprec = absprec // g
                coeffs = coeffs[:absprec - v]
        self.coeffs = coeffs
        self.v = v
        self.e = e
        self.absprec = absprec

    # == inspection

    def is_zero(self) -> bool:
        """True for exact zeros and for values zero to their precision"""
        return len(self.coeffs) == 0

    @property
    def is_exact(self) -> bool:
        return self.absprec is None

    @property
    def prec(self):
        """Relative precision in pi^(1/e) steps, None when exact"""
        if self.absprec is None:
            return None
        return self.absprec - self.v

    def valuation(self):
        """v_inf as an exact Fraction; inf for an exact zero"""
        if self.is_zero():
            if self.is_exact:
                return math.inf
            raise PrecisionExhausted(f'zero to precision {Fraction(self.absprec, self.e)}')
        return Fraction(self.v, self.e)

    def sgn(self):
        """Leading coefficient, an element of F_{q^s}"""
        if self.is_zero():
            raise PrecisionExhausted('sign of a value with no significant digits')
        return self.coeffs[0]

    def one_unit(self) -> 'Scalar':
        """<x>, the 1-unit part of x = pi^v sgn(x) <x>"""
        lead = self.sgn()
        return Scalar(self.tower, self.coeffs * (lead ** -1), v=0, e=self.e,
                      absprec=None if self.absprec is None else self.absprec - self.v)

    def residual(self):
        """Valuation reached by a difference: its valuation, or its known precision if zero

        >>> T = Tower(FqConfig(2), N=6)
        >>> (T.uniformizer() - T.uniformizer()).residual()
        inf
        """
        if self.is_zero():
            return math.inf if self.is_exact else Fraction(self.absprec, self.e)
        return Fraction(self.v, self.e)

    def coeff_at(self, k: int, e: int | None = None):
        """Coefficient of pi^(k/e) (e defaults to self.e)"""
        e = e or self.e
        if e % self.e:
            if (k * self.e) % e:
                return self.tower.field(0)
            k, e = k * self.e // e, self.e
        step = e // self.e
        if k % step:
            return self.tower.field(0)
        j = k // step - self.v
        if self.absprec is not None and k // step >= self.absprec:
            raise PrecisionExhausted(f'coefficient {k}/{e} is beyond precision')
        if j < 0 or j >= len(self.coeffs):
            return self.tower.field(0)
        return self.coeffs[j]

    def truncate(self, absprec: int, e: int | None = None) -> 'Scalar':
        """Forget everything at or beyond pi^(absprec/e)"""
        e = e or self.e
        E = math.lcm(e, self.e)
        coeffs, v, ap = self._spread(E)
        limit = absprec * (E // e)
        ap = limit if ap is None else min(ap, limit)
        return Scalar(self.tower, coeffs, v=v, e=E, absprec=ap)

    def lift(self, tower: Tower) -> 'Scalar':
        """Same value with coefficients embedded in a larger residue field"""
        if tower == self.tower:
            return self
        coeffs = subfield_embedding(self.tower.field, tower.field)(self.coeffs) if len(self.coeffs) else tower.field.Zeros(0)
        return Scalar(tower, coeffs, v=self.v, e=self.e, absprec=self.absprec)

    def __repr__(self):
        body = to_ints(self.coeffs)
        if len(body) > 12:
            body = [*body[:12], '...']
        prec = 'exact' if self.absprec is None else self.absprec - self.v
        return f'Scalar(e={self.e}, v={self.v}, prec={prec}, {body})'.replace("'...'", '...')

    def to_json(self) -> dict:
        return {'e': self.e, 'v': self.v, 'prec': self.prec, 'coeffs': to_ints(self.coeffs)}

    @classmethod
    def from_json(cls, tower: Tower, data: dict) -> 'Scalar':
        prec = data['prec']
        absprec = None if prec is None else data['v'] + prec
        return cls(tower, tower.field(data['coeffs']), v=data['v'], e=data['e'], absprec=absprec)

    # == arithmetic plumbing

    def _spread(self, E: int):
        """(coeffs, v, absprec) in units of pi^(1/E); no renormalisation"""
        k = E // self.e
        if k == 1 or len(self.coeffs) == 0:
            ap = None if self.absprec is None else self.absprec * k
            v = self.v * k
            return self.coeffs, v, ap
        field = self.tower.field
        n = len(self.coeffs)
        length = (n - 1) * k + 1 if self.absprec is None else n * k
        arr = field.Zeros(length)
        arr[::k] = self.coeffs
        ap = None if self.absprec is None else self.absprec * k
        return arr, self.v * k, ap

    def _coerce(self, other) -> 'Scalar':
        if isinstance(other, Scalar):
            if other.tower == self.tower:
                return other
            return other.lift(self.tower.common(other.tower))
        if isinstance(other, (int, np.integer, galois.FieldArray)):
            return self.tower.constant(other)
        return NotImplemented

    def _pair(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented, NotImplemented
        if other.tower != self.tower:
            tower = self.tower.common(other.tower)
            return self.lift(tower), other.lift(tower)
        return self, other

    def __add__(self, other):
        x, y = self._pair(other)
        if x is NotImplemented:
            return NotImplemented
        return _add(x, y)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(self.tower, -self.coeffs, v=self.v, e=self.e, absprec=self.absprec)

    def __sub__(self, other):
        x, y = self._pair(other)
        if x is NotImplemented:
            return NotImplemented
        return _add(x, -y)

    def __rsub__(self, other):
        x, y = self._pair(other)
        if x is NotImplemented:
            return NotImplemented
        return _add(y, -x)

    def __mul__(self, other):
        x, y = self._pair(other)
        if x is NotImplemented:
            return NotImplemented
        return _mul(x, y)

    __rmul__ = __mul__

    def __truediv__(self, other):
        x, y = self._pair(other)
        if x is NotImplemented:
            return NotImplemented
        return _mul(x, y.inv())

    def __rtruediv__(self, other):
        x, y = self._pair(other)
        if x is NotImplemented:
            return NotImplemented
        return _mul(y, x.inv())

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        result = self.tower.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        x, y = self._pair(other)
        if x is NotImplemented:
            return NotImplemented
        return (x - y).is_zero()

    def inv(self) -> 'Scalar':
        """1/x; the divisor must have a significant leading coefficient"""
        if self.is_zero():
            raise DivisionByApparentZero(f'inverse of {self!r}')
        field = self.tower.field
        if self.absprec is None and len(self.coeffs) == 1:
            return Scalar(self.tower, self.coeffs ** -1, v=-self.v, e=self.e)
        length = self.prec if self.absprec is not None else self.tower.N * self.e
        coeffs = series_inverse(self.coeffs, length) if len(self.coeffs) >= length else \
            series_inverse(_padded(field, self.coeffs, length), length)
        return Scalar(self.tower, coeffs, v=-self.v, e=self.e, absprec=-self.v + length)

    # == Frobenius and roots

    def frobenius(self, k: int = 1) -> 'Scalar':
        """x^(q^k); negative k takes q^|k|-th roots and raises the index

        >>> T = Tower(FqConfig(3), N=10)
        >>> x = T.series([1, 2, 0, 1], v=-1)
        >>> x.frobenius(1).frobenius(-1) == x
        True
        >>> T.uniformizer().frobenius(1)
        Scalar(e=1, v=3, prec=exact, [1])
        """
        if k == 0:
            return self
        tower = self.tower
        Q = tower.q ** abs(k)
        if k > 0:
            if len(self.coeffs) == 0:
                return Scalar(tower, self.coeffs, v=0, e=self.e,
                              absprec=None if self.absprec is None else self.absprec * Q)
            coeffs = self.coeffs ** Q
            n = len(coeffs)
            length = (n - 1) * Q + 1 if self.absprec is None else n * Q
            arr = tower.field.Zeros(length)
            arr[::Q] = coeffs
            ap = None if self.absprec is None else self.absprec * Q
            return Scalar(tower, arr, v=self.v * Q, e=self.e, absprec=ap)
        e = self.e * Q
        tower.check_ramification(e)
        coeffs = fq_qth_root(self.coeffs, tower.q, -k) if len(self.coeffs) else self.coeffs
        return Scalar(tower, coeffs, v=self.v, e=e, absprec=self.absprec)

    def pth_root(self) -> 'Scalar':
        """x^(1/p), coefficientwise"""
        e = self.e * self.tower.p
        self.tower.check_ramification(e)
        coeffs = fq_pth_root(self.coeffs) if len(self.coeffs) else self.coeffs
        return Scalar(self.tower, coeffs, v=self.v, e=e, absprec=self.absprec)

    def nth_root(self, n: int) -> 'Scalar':
        """An n-th root: pi-power, smallest root of the sign, and the 1-unit root"""
        lead = self.sgn()
        wild = _p_part(n, self.tower.p)
        tame = n // wild
        c = lead if tame == 1 else fq_nth_root(lead, tame)
        if c is None:
            raise UnsupportedField(f'sign has no {tame}-th root in F_(q^{self.tower.s})')
        if wild > 1:
            for _ in range(round(math.log(wild, self.tower.p))):
                c = fq_pth_root(c)
        e = self.e * n
        self.tower.check_ramification(e)
        head = Scalar(self.tower, c.reshape(1), v=self.v, e=e)
        return head * unit_root(self.one_unit(), n)


def _padded(field, coeffs, length):
    arr = field.Zeros(length)
    arr[:len(coeffs)] = coeffs[:length]
    return arr


def _add(x: Scalar, y: Scalar) -> Scalar:
    tower = x.tower
    if y.is_zero() and y.is_exact:
        return x
    if x.is_zero() and x.is_exact:
        return y
    E = math.lcm(x.e, y.e)
    parts = [x._spread(E), y._spread(E)]
    aps = [ap for _, _, ap in parts if ap is not None]
    absprec = min(aps) if aps else None
    live = [(c, v) for c, v, _ in parts if len(c)]
    if not live:
        return Scalar(tower, tower.field.Zeros(0), v=0, e=E, absprec=absprec)
    lo = min(v for _, v in live)
    hi = absprec if absprec is not None else max(v + len(c) for c, v in live)
    if hi <= lo:
        return Scalar(tower, tower.field.Zeros(0), v=0, e=E, absprec=absprec)
    arr = tower.field.Zeros(hi - lo)
    for c, v in live:
        if v >= hi:
            continue
        take = min(len(c), hi - v)
        arr[v - lo:v - lo + take] += c[:take]
    return Scalar(tower, arr, v=lo, e=E, absprec=absprec)


def _mul(x: Scalar, y: Scalar) -> Scalar:
    tower = x.tower
    if (x.is_zero() and x.is_exact) or (y.is_zero() and y.is_exact):
        return tower.zero()
    E = math.lcm(x.e, y.e)
    c1, v1, a1 = x._spread(E)
    c2, v2, a2 = y._spread(E)
    if not len(c1) or not len(c2):
        # at least one inexact zero: only a bound on the product survives
        lo1 = a1 if not len(c1) else v1
        lo2 = a2 if not len(c2) else v2
        return Scalar(tower, tower.field.Zeros(0), v=0, e=E, absprec=lo1 + lo2)
    rels = [ap - v for ap, v in ((a1, v1), (a2, v2)) if ap is not None]
    if not rels:
        return Scalar(tower, np.convolve(c1, c2), v=v1 + v2, e=E)
    rel = min(rels)
    return Scalar(tower, series_mul(c1, c2, rel), v=v1 + v2, e=E, absprec=v1 + v2 + rel)


def unit_root(x: Scalar, h: int) -> Scalar:
    """The unique 1-unit y with y^h = x

    >>> T = Tower(FqConfig(3), N=12)
    >>> pi = T.uniformizer()
    >>> unit_root(T.one() + pi**3, 3) == T.one() + pi
    True
    >>> y = unit_root(T.one() + pi, 7)
    >>> (y**7 - (T.one() + pi)).residual() >= 12
    True
    """
    if h < 1:
        raise ValueError('root order must be positive')
    if x.is_zero() or x.v != 0 or int(x.coeffs[0]) != 1:
        raise NotOneUnit(f'{x!r} is not a 1-unit')
    p = x.tower.p
    a = 0
    m = h
    while m % p == 0:
        m //= p
        a += 1
    y = x
    if m > 1:
        y = x.tower.one()
        mm = x.tower.constant(m)
        for step in range(4 * (x.tower.N * x.e).bit_length() + 8):
            delta = (x - y**m) / (mm * y ** (m - 1))
            if delta.is_zero():
                logger.debug(f'unit root of order {m} converged after {step} steps')
                break
            y = y + delta
        else:
            raise NotOneUnit(f'Newton iteration for the {m}-th root did not settle')
    for _ in range(a):
        y = y.pth_root()
    return y


def scalar_arith(x: Scalar, y: Scalar, op: str) -> Scalar:
    """Dispatch form of the field operations: op in add, mul, inv, div"""
    if op == 'add':
        return x + y
    if op == 'mul':
        return x * y
    if op == 'inv':
        return x.inv()
    if op == 'div':
        return x / y
    raise ValueError(f'unknown operation {op}')


def frobenius(x: Scalar, k: int) -> Scalar:
    return x.frobenius(k)


if __name__ == '__main__':
    __import__('doctest').testmod(optionflags=4 | 8 | 32)
