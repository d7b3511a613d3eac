import logging
import os

import numpy as np

from gzl.curveutils import AElem, Curve
from gzl.scalarutils import Scalar, Tower

logger = logging.getLogger(__name__)

__all__ = [
    'generator',
    'random_scalar',
    'random_unit',
    'random_aelem',
    'random_vector',
    'random_series',
]


def generator(seed: int | np.random.Generator | None = None) -> np.random.Generator:
    """Seeded generator; with no seed, seed through the OS"""
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None:
        seed = int.from_bytes(os.urandom(4), byteorder='big')
        logger.debug(f'random seed {seed}')
    return np.random.default_rng(seed)


def random_scalar(tower: Tower, v: int = 0, length: int | None = None, seed=None) -> Scalar:
    """Exact scalar with random coefficients from pi^v to pi^(v + length - 1)"""
    rng = generator(seed)
    length = length or tower.N
    coeffs = rng.integers(0, tower.field.order, size=length)
    return tower.series([int(c) for c in coeffs], v=v)


def random_unit(tower: Tower, seed=None) -> Scalar:
    """Random exact unit with a nonzero leading coefficient"""
    rng = generator(seed)
    x = random_scalar(tower, 0, tower.N, rng)
    lead = int(rng.integers(1, tower.field.order))
    return x - x.coeff_at(0) + tower.constant(tower.field(lead))


def random_aelem(curve: Curve, degree: int, seed=None, monic: bool = True) -> AElem:
    """Random element of A of exact degree `degree` (never 1)"""
    rng = generator(seed)
    lower = {k: int(rng.integers(0, curve.q)) for k in curve.degrees(degree - 1)}
    lead = 1 if monic else int(rng.integers(1, curve.q))
    return curve.from_monomials({**lower, degree: lead})


def random_vector(tower: Tower, n: int, v: int = 1, length: int | None = None, seed=None) -> list:
    """n random scalars of valuation at least v"""
    rng = generator(seed)
    return [random_scalar(tower, v, length, rng) for _ in range(n)]


def random_series(tower: Tower, seed=None) -> Scalar:
    """A random scalar of valuation 0 over the full precision"""
    return random_unit(tower, seed)


if __name__ == '__main__':
    __import__('doctest').testmod(optionflags=4 | 8 | 32)
