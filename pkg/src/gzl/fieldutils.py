"""Finite fields, their embeddings and truncated power-series kernels.

All finite-field arithmetic goes through :mod:`galois`; this module caches
the field classes and supplies the few helpers the rest of the package
needs on top of them (subfield embeddings, q-th roots, Newton inversion of
coefficient arrays).
"""
import itertools
import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache

import galois
import numpy as np

from gzl.exception import ConfigInvalid, UnsupportedField

logger = logging.getLogger(__name__)

__all__ = [
    'FqConfig',
    'finite_field',
    'subfield_embedding',
    'descend',
    'to_ints',
    'fq_pth_root',
    'fq_qth_root',
    'fq_nth_root',
    'root_of_unity',
    'series_mul',
    'series_inverse',
    'monic_polys',
    'all_polys',
    'fq_null_space',
    'fq_solve',
]


@lru_cache(maxsize=None)
def finite_field(p: int, k: int = 1, modulus: tuple | None = None):
    """Cached `galois.GF(p**k)`; `modulus` is a tuple of descending ints

    >>> F = finite_field(3, 2)
    >>> F.order
    9
    >>> finite_field(3, 2) is F
    True
    """
    if modulus is None or k == 1:
        return galois.GF(p**k)
    irr = galois.Poly(list(modulus), field=galois.GF(p))
    return galois.GF(p**k, irreducible_poly=irr)


@dataclass(frozen=True)
class FqConfig:
    """F_q with q = p^r, and the residue extension F_{q^s} used by scalars

    >>> fq = FqConfig(3)
    >>> fq.q, fq.fq.order, fq.fqs.order
    (3, 3, 3)
    >>> FqConfig(3, s=2).fqs.order
    9
    >>> FqConfig(4)
    Traceback (most recent call last):
     ...
    gzl.exception.ConfigInvalid: p=4 is not prime
    """

    p: int
    r: int = 1
    modulus: tuple | None = None
    s: int = 1

    def __post_init__(self):
        if not galois.is_prime(self.p):
            raise ConfigInvalid(f'p={self.p} is not prime')
        if self.r < 1 or self.s < 1:
            raise ConfigInvalid('extension degrees must be positive')
        if self.modulus is not None:
            poly = galois.Poly(list(self.modulus), field=galois.GF(self.p))
            if poly.degree != self.r or not poly.is_irreducible():
                raise ConfigInvalid(f'modulus {self.modulus} is not irreducible of degree {self.r}')

    @property
    def q(self) -> int:
        return self.p**self.r

    @cached_property
    def fq(self):
        return finite_field(self.p, self.r, self.modulus)

    @cached_property
    def fqs(self):
        if self.s == 1:
            return self.fq
        return finite_field(self.p, self.r * self.s)

    def extend(self, s: int) -> 'FqConfig':
        return FqConfig(self.p, self.r, self.modulus, s)

    def require_prime(self, what: str):
        if self.r != 1:
            raise UnsupportedField(f'{what} needs a prime field, got q={self.q}')

    def embed(self, x):
        """Image of F_q elements (ints or field array) in F_{q^s}"""
        return subfield_embedding(self.fq, self.fqs)(x)


class _Embedding:
    """Ring embedding small -> big given by a lookup table on int labels."""

    def __init__(self, small, big):
        self.small, self.big = small, big
        if small is big:
            self.table = None
            return
        p = small.characteristic
        if big.characteristic != p or big.degree % small.degree:
            raise UnsupportedField(f'{small.name} does not embed in {big.name}')
        if small.degree == 1:
            self.table = big(np.arange(p))
            return
        irr = galois.Poly(to_ints(small.irreducible_poly.coeffs), field=big)
        roots = irr.roots()
        root = big(min(to_ints(roots)))
        powers = [root ** k for k in range(small.degree - 1, -1, -1)]
        images = []
        for x in small.elements:
            acc = big(0)
            for c, pw in zip(to_ints(x.vector()), powers):
                acc = acc + big(c) * pw
            images.append(int(acc))
        self.table = big(images)
        logger.debug(f'embedding {small.name} -> {big.name} through root {int(root)}')

    def __call__(self, x):
        if self.table is None:
            return self.small(x) if not isinstance(x, self.small) else x
        ints = np.asarray(x.view(np.ndarray) if isinstance(x, galois.FieldArray) else x, dtype=np.int64)
        return self.table[ints]


@lru_cache(maxsize=None)
def subfield_embedding(small, big):
    """Embedding of a subfield, as a callable on arrays

    >>> F, E = finite_field(3), finite_field(3, 2)
    >>> int(subfield_embedding(F, E)(F(2)))
    2
    """
    return _Embedding(small, big)


def descend(x, small):
    """Element of `small` whose image in the field of x is x

    >>> F, E = finite_field(3), finite_field(3, 2)
    >>> int(descend(E(2), F))
    2
    """
    big = type(x)
    if big is small:
        return x
    table = subfield_embedding(small, big).table
    idx = np.flatnonzero(table.view(np.ndarray) == int(x))
    if len(idx) == 0:
        raise UnsupportedField(f'{int(x)} does not lie in {small.name}')
    return small(int(idx[0]))


def to_ints(arr) -> list:
    """Plain ints of a field array (or int sequence)

    >>> to_ints(finite_field(5)([1, 4]))
    [1, 4]
    """
    if isinstance(arr, galois.FieldArray):
        return [int(x) for x in np.atleast_1d(arr.view(np.ndarray))]
    return [int(x) for x in np.atleast_1d(arr)]


def fq_pth_root(x):
    """Inverse of x -> x^p in GF(p^k)

    >>> F = finite_field(3, 2)
    >>> a = F(5)
    >>> fq_pth_root(a) ** 3 == a
    True
    """
    field = type(x)
    return x ** (field.characteristic ** (field.degree - 1))


def fq_qth_root(x, q: int, k: int = 1):
    """Inverse of x -> x^(q^k) in F_{q^s}, where x lives in GF(q^s)"""
    field = type(x)
    r = 1
    while field.characteristic**r < q:
        r += 1
    s = field.degree // r
    if s <= 1:
        return x
    return x ** (q ** ((-k) % s))


def fq_nth_root(c, n: int):
    """Smallest root of w^n = c in the field of c, or None

    >>> F = finite_field(5)
    >>> int(fq_nth_root(F(4), 2))
    2
    >>> fq_nth_root(F(2), 2) is None
    True
    """
    field = type(c)
    poly = galois.Poly.Degrees([n, 0], coeffs=field([1, int(-c)]), field=field)
    roots = poly.roots()
    if len(roots) == 0:
        return None
    return field(min(to_ints(roots)))


def root_of_unity(field, order: int):
    """Smallest element of exact multiplicative order `order`

    >>> int(root_of_unity(finite_field(7), 3))
    2
    """
    if (field.order - 1) % order:
        raise UnsupportedField(f'{field.name} has no element of order {order}')
    for x in range(1, field.order):
        el = field(x)
        if int(el.multiplicative_order()) == order:
            return el
    raise UnsupportedField(f'no element of order {order} in {field.name}')


def series_mul(a, b, length: int):
    """Product of coefficient arrays truncated to `length` terms"""
    if len(a) == 0 or len(b) == 0 or length <= 0:
        return type(a).Zeros(0) if isinstance(a, galois.FieldArray) else a[:0]
    return np.convolve(a[:length], b[:length])[:length]


def series_inverse(a, length: int):
    """Inverse of a power series with a[0] != 0, by Newton doubling

    >>> F = finite_field(3)
    >>> to_ints(series_inverse(F([1, 2]), 4))   # 1/(1 - x)
    [1, 1, 1, 1]
    """
    field = type(a)
    y = field([int(a[0] ** -1)])
    k = 1
    while k < length:
        k = min(2 * k, length)
        err = np.convolve(a[:k], y)[:k]
        err[0] = err[0] - field(1)
        corr = np.convolve(y, err)[:k]
        nxt = field.Zeros(k)
        nxt[:len(y)] = y
        y = nxt - corr
    return y[:length]


def monic_polys(field, degree: int):
    """All monic polynomials of exact `degree`, in a deterministic order

    >>> len(list(monic_polys(finite_field(3), 2)))
    9
    """
    for tail in itertools.product(range(field.order), repeat=degree):
        yield galois.Poly([1, *tail], field=field)


def all_polys(field, below: int):
    """All polynomials of degree < `below` (zero included)"""
    for coeffs in itertools.product(range(field.order), repeat=below):
        yield galois.Poly(list(coeffs) or [0], field=field)


def fq_null_space(rows, field):
    """Basis (list of int lists) of the right kernel of an F_q matrix

    >>> F = finite_field(3)
    >>> kernel = fq_null_space([[1, 1, 0]], F)
    >>> len(kernel)
    2
    >>> all((v[0] + v[1]) % 3 == 0 for v in kernel)
    True
    """
    mat = field(np.array(rows, dtype=np.int64).reshape(len(rows), -1))
    if mat.shape[0] == 0:
        return [[int(i == j) for j in range(mat.shape[1])] for i in range(mat.shape[1])]
    kernel = mat.null_space()
    return [to_ints(row) for row in kernel]


def fq_solve(rows, rhs, field):
    """One solution x of M x = rhs over F_q, or None"""
    mat = field(np.array(rows, dtype=np.int64).reshape(len(rows), -1))
    ncols = mat.shape[1]
    aug = np.hstack([mat.view(np.ndarray), np.array(rhs, dtype=np.int64).reshape(-1, 1)])
    red = field(aug).row_reduce()
    x = [0] * ncols
    for row in red:
        nz = np.flatnonzero(row.view(np.ndarray))
        if len(nz) == 0:
            continue
        lead = int(nz[0])
        if lead == ncols:
            return None
        x[lead] = int(row[ncols])
    return x


if __name__ == '__main__':
    __import__('doctest').testmod(optionflags=4 | 8 | 32)
