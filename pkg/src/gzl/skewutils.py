"""Twisted polynomials sum c_i tau^i with tau c = c^q tau.

Coefficients may be scalars, elements of H given by their conjugates, or
finite-field elements; for the latter the twist is the q-power map.
"""
import logging

import galois

from gzl.exception import NonInvertibleLeadingCoefficient
from gzl.seriesutils import is_zero, residual_of, twist

logger = logging.getLogger(__name__)

__all__ = [
    'SkewPoly',
    'skew_twist',
    'skew_ops',
    'gcrd',
]


def skew_twist(x, k: int, q: int):
    """x^(q^k) for any coefficient type"""
    if k == 0:
        return x
    if isinstance(x, galois.FieldArray):
        return x ** (q ** k)
    return twist(x, k)


class SkewPoly:
    """Element of R{tau}; coefficients ascending in tau

    >>> F = galois.GF(3)
    >>> tau = SkewPoly([F(0), F(1)], q=3)
    >>> one = SkewPoly([F(1)], q=3)
    >>> ((tau + one) * (tau - one)).coeffs == [F(2), F(0), F(1)]
    True
    >>> quo, rem = (tau * tau - one).right_divmod(tau - one)
    >>> quo == tau + one, rem.is_zero()
    (True, True)
    """

    __slots__ = ('coeffs', 'q')
    __array_ufunc__ = None

    def __init__(self, coeffs, q: int):
        coeffs = list(coeffs)
        while len(coeffs) > 1 and is_zero(coeffs[-1]):
            coeffs.pop()
        self.coeffs = coeffs
        self.q = q

    @classmethod
    def constant(cls, c, q: int):
        return cls([c], q)

    @property
    def zero(self):
        return self.coeffs[0] * 0

    @property
    def degree(self) -> int:
        """tau-degree, -1 for zero"""
        if self.is_zero():
            return -1
        return len(self.coeffs) - 1

    @property
    def lead(self):
        return self.coeffs[-1]

    def coeff(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.zero

    def is_zero(self) -> bool:
        return all(is_zero(c) for c in self.coeffs)

    def residual(self):
        return residual_of(list(self.coeffs))

    def __repr__(self):
        return f'SkewPoly(deg={self.degree})'

    def __eq__(self, other):
        if not isinstance(other, SkewPoly):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def _lift(self, other):
        if isinstance(other, SkewPoly):
            return other
        return SkewPoly([other], self.q)

    def __add__(self, other):
        other = self._lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return SkewPoly([self.coeff(i) + other.coeff(i) for i in range(n)], self.q)

    __radd__ = __add__

    def __neg__(self):
        return SkewPoly([-c for c in self.coeffs], self.q)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        """(sum a_i tau^i)(sum b_j tau^j) = sum a_i b_j^(q^i) tau^(i+j)"""
        if not isinstance(other, SkewPoly):
            return SkewPoly([c * skew_twist(other, i, self.q) for i, c in enumerate(self.coeffs)], self.q)
        out = [None] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                term = a * skew_twist(b, i, self.q)
                out[i + j] = term if out[i + j] is None else out[i + j] + term
        zero = self.zero
        return SkewPoly([zero if c is None else c for c in out], self.q)

    def __rmul__(self, other):
        """Left multiplication by a constant"""
        return SkewPoly([other * c for c in self.coeffs], self.q)

    def __pow__(self, k: int):
        result = SkewPoly([self.coeffs[0] ** 0], self.q)
        for _ in range(k):
            result = result * self
        return result

    def __call__(self, x):
        """sum c_i x^(q^i)"""
        acc = None
        for i, c in enumerate(self.coeffs):
            term = c * skew_twist(x, i, self.q)
            acc = term if acc is None else acc + term
        return acc

    def frobenius(self, k: int) -> 'SkewPoly':
        """Twist every coefficient"""
        return SkewPoly([skew_twist(c, k, self.q) for c in self.coeffs], self.q)

    def map(self, func) -> 'SkewPoly':
        return SkewPoly([func(c) for c in self.coeffs], self.q)

    def monic(self) -> 'SkewPoly':
        """lead^-1 * self (left scaling keeps the twist)"""
        inv = _inverse(self.lead)
        return SkewPoly([inv * c for c in self.coeffs], self.q)

    def right_divmod(self, v: 'SkewPoly'):
        """(quo, rem) with self = quo * v + rem and deg rem < deg v"""
        m = v.degree
        if m < 0:
            raise NonInvertibleLeadingCoefficient('division by the zero twisted polynomial')
        lead = v.lead
        if is_zero(lead):
            raise NonInvertibleLeadingCoefficient('leading coefficient is zero to precision')
        zero = self.zero
        quo = [zero] * max(self.degree - m + 1, 1)
        rem = self
        while rem.degree >= m:
            k = rem.degree
            c = rem.lead / skew_twist(lead, k - m, self.q)
            quo[k - m] = c
            term = SkewPoly([zero] * (k - m) + [c], self.q) * v
            nxt = rem - term
            # the leading term cancels by construction, drop what precision left of it
            rem = SkewPoly(nxt.coeffs[:k] or [zero], self.q)
        return SkewPoly(quo, self.q), rem


def _inverse(x):
    if isinstance(x, galois.FieldArray):
        return x ** -1
    return (x ** 0) / x


def gcrd(u: SkewPoly, v: SkewPoly) -> SkewPoly:
    """Monic right gcd by the right Euclidean algorithm

    >>> F = galois.GF(3)
    >>> tau, one = SkewPoly([F(0), F(1)], 3), SkewPoly([F(1)], 3)
    >>> gcrd((tau + one) * (tau - one), tau * (tau - one)) == tau - one
    True
    """
    a, b = (u, v) if u.degree >= v.degree else (v, u)
    while not b.is_zero():
        _, r = a.right_divmod(b)
        a, b = b, r
    logger.debug(f'right gcd of tau-degree {a.degree}')
    return a.monic()


def skew_ops(u: SkewPoly, v: SkewPoly, op: str = 'mul'):
    """Dispatch form of mul, right_divmod, gcrd"""
    if op == 'mul':
        return u * v
    if op == 'right_divmod':
        return u.right_divmod(v)
    if op == 'gcrd':
        return gcrd(u, v)
    raise ValueError(f'unknown twisted polynomial operation {op}')


if __name__ == '__main__':
    __import__('doctest').testmod(optionflags=4 | 8 | 32)
