"""Local Laurent series and polynomials in t over scalars.

:class:`Series` is a truncated Laurent series in a local parameter u whose
coefficients are ring elements (scalars or finite-field elements).
:class:`TPoly` is a polynomial in t with scalar coefficients, or a
t-power series truncated at a fixed degree (an element of the Tate algebra
as far as it is known).
"""
import logging
import math

import galois

from gzl.exception import DivisionByApparentZero, PrecisionExhausted
from gzl.scalarutils import Scalar, Tower

logger = logging.getLogger(__name__)

__all__ = [
    'Series',
    'TPoly',
    'is_zero',
    'zero_like',
    'one_like',
    'twist',
    'residual_of',
]


def is_zero(x) -> bool:
    """Zero test shared by scalars, finite-field elements and ints"""
    if isinstance(x, galois.FieldArray):
        return int(x) == 0
    if hasattr(x, 'is_zero'):
        return x.is_zero()
    return x == 0


def zero_like(x):
    if isinstance(x, Scalar):
        return x.tower.zero()
    if isinstance(x, galois.FieldArray):
        return type(x)(0)
    return 0


def one_like(x):
    if isinstance(x, Scalar):
        return x.tower.one()
    if isinstance(x, galois.FieldArray):
        return type(x)(1)
    return 1


def twist(x, k: int):
    """x^(q^k) for scalars; F_q constants are fixed by the twist"""
    if k == 0:
        return x
    if hasattr(x, 'frobenius'):
        return x.frobenius(k)
    return x


def residual_of(x):
    """Valuation reached by a difference (scalar, series, polynomial or nested list)"""
    if isinstance(x, Scalar):
        return x.residual()
    if isinstance(x, (Series, TPoly)):
        return x.residual()
    if isinstance(x, (list, tuple)):
        return min((residual_of(y) for y in x), default=math.inf)
    if isinstance(x, galois.FieldArray):
        return math.inf if int(x) == 0 else 0
    return math.inf if x == 0 else 0


class Series:
    """Laurent series sum_k coeffs[k] u^(v+k), known modulo u^(v + len(coeffs))

    >>> from gzl.fieldutils import FqConfig
    >>> T = Tower(FqConfig(3), N=10)
    >>> one = T.one()
    >>> s = Series([one, one], v=-1)     # u^-1 + 1
    >>> (s * s).coeff(-2) == one
    True
    >>> (s * s.inv()).coeff(0) == one
    True
    """

    __slots__ = ('coeffs', 'v', 'zero')
    __array_ufunc__ = None

    def __init__(self, coeffs, v: int = 0, zero=None):
        self.coeffs = list(coeffs)
        self.v = v
        if zero is None:
            if not self.coeffs:
                raise ValueError('an empty series needs an explicit zero')
            zero = zero_like(self.coeffs[0])
        self.zero = zero

    @property
    def absprec(self) -> int:
        return self.v + len(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __repr__(self):
        return f'Series(v={self.v}, len={len(self.coeffs)})'

    def coeff(self, k: int):
        """Coefficient of u^k"""
        if k >= self.absprec:
            raise PrecisionExhausted(f'u^{k} is beyond the known terms (u^{self.absprec})')
        if k < self.v:
            return self.zero
        return self.coeffs[k - self.v]

    def residue(self):
        return self.coeff(-1)

    def order(self):
        """Exponent of the first coefficient that is not zero to precision, or None"""
        for i, c in enumerate(self.coeffs):
            if not is_zero(c):
                return self.v + i
        return None

    def leading(self):
        k = self.order()
        if k is None:
            raise PrecisionExhausted('no significant coefficient')
        return self.coeff(k)

    def normalized(self) -> 'Series':
        """Drop leading coefficients that are zero to precision"""
        k = self.order()
        if k is None or k == self.v:
            return self
        return Series(self.coeffs[k - self.v:], v=k, zero=self.zero)

    def is_zero(self) -> bool:
        return self.order() is None

    def residual(self):
        return min((residual_of(c) for c in self.coeffs), default=math.inf)

    def truncate(self, absprec: int) -> 'Series':
        keep = max(0, absprec - self.v)
        return Series(self.coeffs[:keep], v=self.v, zero=self.zero)

    def __add__(self, other):
        if not isinstance(other, Series):
            if is_zero(other) or self.absprec <= 0:
                return self
            if isinstance(self.zero, Scalar) and not isinstance(other, Scalar):
                other = self.zero + other
            other = Series.constant(other, self.absprec, zero=self.zero)
        lo = min(self.v, other.v)
        hi = min(self.absprec, other.absprec)
        out = []
        for k in range(lo, hi):
            a = self.coeffs[k - self.v] if k >= self.v else None
            b = other.coeffs[k - other.v] if k >= other.v else None
            if a is None:
                out.append(b if b is not None else self.zero)
            elif b is None:
                out.append(a)
            else:
                out.append(a + b)
        return Series(out, v=lo, zero=self.zero)

    __radd__ = __add__

    def __neg__(self):
        return Series([-c for c in self.coeffs], v=self.v, zero=self.zero)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Series):
            return Series([c * other for c in self.coeffs], v=self.v, zero=self.zero)
        a, b = self.normalized(), other.normalized()
        length = min(len(a), len(b))
        out = []
        for k in range(length):
            acc = self.zero
            for i in range(k + 1):
                acc = acc + a.coeffs[i] * b.coeffs[k - i]
            out.append(acc)
        return Series(out, v=a.v + b.v, zero=self.zero)

    __rmul__ = __mul__

    def inv(self) -> 'Series':
        a = self.normalized()
        if not a.coeffs or is_zero(a.coeffs[0]):
            raise DivisionByApparentZero('inverse of a series with no significant term')
        lead = a.coeffs[0]
        inv0 = 1 / lead if not isinstance(lead, galois.FieldArray) else lead ** -1
        out = [inv0]
        for k in range(1, len(a)):
            acc = self.zero
            for i in range(1, k + 1):
                acc = acc + a.coeffs[i] * out[k - i]
            out.append(-(acc * inv0))
        return Series(out, v=-a.v, zero=self.zero)

    def __truediv__(self, other):
        if isinstance(other, Series):
            return self * other.inv()
        inv = 1 / other if not isinstance(other, galois.FieldArray) else other ** -1
        return self * inv

    def __rtruediv__(self, other):
        return self.inv() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        if k == 0:
            return Series.constant(one_like(self.zero), max(len(self), 1), zero=self.zero)
        result = None
        base = self
        while k:
            if k & 1:
                result = base if result is None else result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def shift(self, k: int) -> 'Series':
        """Multiply by u^k"""
        return Series(self.coeffs, v=self.v + k, zero=self.zero)

    def derivative(self) -> 'Series':
        out = [c * (self.v + i) for i, c in enumerate(self.coeffs)]
        return Series(out, v=self.v - 1, zero=self.zero)

    def frobenius(self, k: int) -> 'Series':
        """Twist every coefficient; the parameter u is left alone"""
        return Series([twist(c, k) for c in self.coeffs], v=self.v, zero=twist(self.zero, k))

    def map(self, func) -> 'Series':
        return Series([func(c) for c in self.coeffs], v=self.v, zero=self.zero)

    @classmethod
    def constant(cls, c, length: int, zero=None) -> 'Series':
        zero = zero if zero is not None else zero_like(c)
        return cls([c] + [zero] * (length - 1), v=0, zero=zero)

    @classmethod
    def parameter(cls, one, length: int) -> 'Series':
        """The local parameter u itself, known to `length` terms"""
        zero = zero_like(one)
        return cls([one] + [zero] * (length - 1), v=1, zero=zero)


class TPoly:
    """Polynomial in t over scalars, or a t-series known modulo t^trunc

    >>> from gzl.fieldutils import FqConfig
    >>> T = Tower(FqConfig(3), N=10)
    >>> theta = T.uniformizer() ** -2
    >>> p = TPoly.linear(T, -theta)       # t - theta
    >>> p(theta).is_zero()
    True
    >>> (p * p).degree
    2
    """

    __slots__ = ('tower', 'coeffs', 'trunc')
    __array_ufunc__ = None

    def __init__(self, tower: Tower, coeffs, trunc=None):
        self.tower = tower
        coeffs = [c if isinstance(c, Scalar) else tower.constant(c) for c in coeffs]
        if trunc is not None:
            coeffs = coeffs[:trunc]
            coeffs += [tower.zero()] * (trunc - len(coeffs))
        else:
            while coeffs and coeffs[-1].is_zero() and coeffs[-1].is_exact:
                coeffs.pop()
        self.coeffs = coeffs
        self.trunc = trunc

    @classmethod
    def constant(cls, tower, c, trunc=None):
        return cls(tower, [c], trunc)

    @classmethod
    def linear(cls, tower, c, trunc=None):
        """t + c"""
        return cls(tower, [c, tower.one()], trunc)

    @classmethod
    def from_poly(cls, tower, poly: galois.Poly, trunc=None):
        """Image of an F_q[t] polynomial"""
        return cls(tower, [tower.constant(c) for c in poly.coeffs[::-1]], trunc)

    @property
    def degree(self) -> int:
        for i in range(len(self.coeffs) - 1, -1, -1):
            if not self.coeffs[i].is_zero():
                return i
        return -1

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def residual(self):
        return min((c.residual() for c in self.coeffs), default=math.inf)

    def coeff(self, i: int) -> Scalar:
        if i < len(self.coeffs):
            return self.coeffs[i]
        if self.trunc is not None and i >= self.trunc:
            raise PrecisionExhausted(f't^{i} is beyond the truncation t^{self.trunc}')
        return self.tower.zero()

    def __repr__(self):
        kind = 'exact' if self.trunc is None else f'mod t^{self.trunc}'
        return f'TPoly(deg={self.degree}, {kind})'

    def _coerce(self, other):
        if isinstance(other, TPoly):
            return other
        if isinstance(other, (Scalar, int, galois.FieldArray)):
            return TPoly(self.tower, [other])
        return NotImplemented

    @staticmethod
    def _trunc(a, b):
        ts = [x for x in (a, b) if x is not None]
        return min(ts) if ts else None

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        zero = self.tower.zero()
        out = [(self.coeffs[i] if i < len(self.coeffs) else zero)
               + (other.coeffs[i] if i < len(other.coeffs) else zero) for i in range(n)]
        return TPoly(self.tower, out, self._trunc(self.trunc, other.trunc))

    __radd__ = __add__

    def __neg__(self):
        return TPoly(self.tower, [-c for c in self.coeffs], self.trunc)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (Scalar, int, galois.FieldArray)):
            return TPoly(self.tower, [c * other for c in self.coeffs], self.trunc)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        trunc = self._trunc(self.trunc, other.trunc)
        n = len(self.coeffs) + len(other.coeffs) - 1
        if trunc is not None:
            n = min(n, trunc)
        zero = self.tower.zero()
        out = [zero] * max(n, 0)
        for i, a in enumerate(self.coeffs):
            if a.is_zero() and a.is_exact:
                continue
            for j, b in enumerate(other.coeffs):
                if i + j >= n:
                    break
                out[i + j] = out[i + j] + a * b
        return TPoly(self.tower, out, trunc)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = TPoly(self.tower, [1], self.trunc)
        for _ in range(k):
            result = result * self
        return result

    def __call__(self, x):
        """Evaluate at a scalar (Horner); a truncated series must converge there"""
        acc = self.tower.zero()
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def frobenius(self, k: int) -> 'TPoly':
        """Twist of the coefficients; t is left alone"""
        return TPoly(self.tower, [c.frobenius(k) for c in self.coeffs], self.trunc)

    def truncate(self, trunc: int) -> 'TPoly':
        return TPoly(self.tower, self.coeffs, trunc if self.trunc is None else min(trunc, self.trunc))

    def shift(self, k: int = 1) -> 'TPoly':
        """Multiply by t^k"""
        trunc = None if self.trunc is None else self.trunc + k
        return TPoly(self.tower, [self.tower.zero()] * k + self.coeffs, trunc)

    def taylor_at(self, x: Scalar, k: int) -> list:
        """The first k coefficients of p(x + u) in u"""
        out = []
        coeffs = list(self.coeffs)
        for _ in range(k):
            if not coeffs:
                out.append(self.tower.zero())
                continue
            # synthetic division by (t - x): value and quotient
            acc = self.tower.zero()
            quot = []
            for c in reversed(coeffs):
                acc = acc * x + c
                quot.append(acc)
            out.append(quot[-1])
            coeffs = list(reversed(quot[:-1]))
        return out

    def local(self, x: Scalar, length: int) -> Series:
        """p(x + u) as a series in u"""
        return Series(self.taylor_at(x, length), v=0, zero=self.tower.zero())

    def tail_rate(self):
        """Least increase of coefficient valuation per degree over the known tail"""
        vals = [(i, c.valuation()) for i, c in enumerate(self.coeffs) if not c.is_zero()]
        if len(vals) < 2:
            return None
        half = vals[len(vals) // 2:]
        return min((b[1] - a[1]) / (b[0] - a[0]) for a, b in zip(half, half[1:])) if len(half) > 1 else None


if __name__ == '__main__':
    __import__('doctest').testmod(optionflags=4 | 8 | 32)
