"""Recognition of exact objects from their expansions at infinity.

Values are peeled against the monomials 1, t, y, t^2, t y, ... whose images
in K_inf have distinct valuations and sign 1. Every recognition is checked
on held-out coefficients that were not used to find it; a failure raises
:class:`gzl.exception.NotRecognized` and is never retried with larger
bounds.
"""
import logging
import math
from functools import lru_cache

from gzl.curveutils import AElem, Curve, KElem
from gzl.exception import NotRecognized, PrecisionExhausted, UnsupportedField, try_else
from gzl.fieldutils import descend, fq_null_space, to_ints
from gzl.matrixutils import solve
from gzl.scalarutils import Scalar

logger = logging.getLogger(__name__)

__all__ = [
    'HOLDOUT',
    'peel',
    'recognize_A',
    'recognize_K',
    'recognize_multiple',
    'recognize_H',
    'minimal_poly',
    'is_integral',
    'recognize',
]

HOLDOUT = 0.2


@lru_cache(maxsize=None)
def _images(curve: Curve, d: int) -> tuple:
    """iota(m_k) for k = 0..d (None at k = 1)"""
    return tuple(None if k == 1 else curve.embed_infinity(curve.monomial(k)) for k in range(d + 1))


def _holdout(curve: Curve, holdout=None, x: Scalar | None = None) -> int:
    """Held-out coefficients: a fraction of the digits of x that are known, at most that fraction of N"""
    frac = HOLDOUT if holdout is None else holdout
    known = curve.tower.N
    if x is not None and x.absprec is not None:
        known = min(known, max(0, x.absprec // x.e))
    return max(1, math.ceil(frac * known))


def peel(x: Scalar, curve: Curve, top: int | None = None):
    """(coefficients {k: c}, remainder) with x = sum c_k iota(m_k) + remainder.

    The remainder has no terms at pi^(-k) for k >= 2 or k = 0; a pi^(-1)
    term survives because there is no monomial of degree 1. Coefficients
    lie in the residue field of the tower.
    """
    if x.is_zero():
        return {}, x
    v = x.valuation()
    if top is None:
        top = max(0, math.ceil(-v))
    images = _images(curve, max(top, 0))
    coeffs = {}
    r = x
    for k in range(top, -1, -1):
        if k == 1:
            continue
        try:
            c = r.coeff_at(-k, 1)
        except PrecisionExhausted:
            raise NotRecognized(f'precision ends before pi^{-k}')
        if int(c) == 0:
            continue
        coeffs[k] = c
        r = r - images[k] * curve.tower.constant(c)
    return coeffs, r


def _exact_coeffs(curve: Curve, coeffs: dict) -> dict:
    out = {}
    for k, c in coeffs.items():
        try:
            out[k] = descend(c, curve.F)
        except UnsupportedField as exc:
            raise NotRecognized(f'coefficient of m_{k} is not in F_{curve.q}') from exc
    return out


def recognize_A(x: Scalar, curve: Curve, holdout=None) -> AElem:
    """The element a of A with iota(a) = x.

    >>> from gzl.curveutils import CurveParams
    >>> from gzl.fieldutils import FqConfig
    >>> from gzl.scalarutils import Tower
    >>> C = Curve(CurveParams(FqConfig(3), (0, 0, 0, -1, 1)), Tower(FqConfig(3), N=30))
    >>> a = C.t * C.y + C.t * 2 + 1
    >>> recognize_A(C.embed_infinity(a), C) == a
    True
    """
    coeffs, r = peel(x, curve)
    need = _holdout(curve, holdout, x)
    if not r.is_zero():
        raise NotRecognized(f'remainder of valuation {r.valuation()} after peeling monomials')
    if r.residual() < need:
        raise NotRecognized(f'only {r.residual()} held-out coefficients, need {need}')
    return curve.from_monomials({k: int(c) for k, c in _exact_coeffs(curve, coeffs).items()})


def _condition_vector(x: Scalar, curve: Curve, top: int, depth: int) -> list:
    """F_p coordinates of the part of x outside A: pi^-1 and pi^1..pi^depth"""
    _, r = peel(x, curve, top)
    out = []
    for k in [-1, *range(1, depth + 1)]:
        try:
            c = r.coeff_at(k, 1)
        except PrecisionExhausted:
            raise NotRecognized(f'precision ends before pi^{k}')
        out.extend(to_ints(c.vector()) if type(c).degree > 1 else [int(c)])
    return out


def recognize_K(x: Scalar, curve: Curve, den_degree: int = 6, holdout=None) -> KElem:
    """x = a / b with a, b in A and deg b <= den_degree, b of least degree.

    >>> from gzl.curveutils import CurveParams
    >>> from gzl.fieldutils import FqConfig
    >>> from gzl.scalarutils import Tower
    >>> C = Curve(CurveParams(FqConfig(3), (0, 0, 0, -1, 1)), Tower(FqConfig(3), N=40))
    >>> x = KElem(C, C.y, C.poly([1, 1]))
    >>> recognize_K(x.embed_infinity(), C) == x
    True
    """
    curve.fq.require_prime('recognition in K')
    if x.is_zero():
        return KElem(curve, curve.aelem(0, 0))
    need = _holdout(curve, holdout, x)
    known = x.absprec // x.e if x.absprec is not None else curve.tower.N
    for db in range(den_degree + 1):
        if db == 1:
            continue
        degrees = curve.degrees(db)
        top = max(0, math.ceil(-x.valuation())) + db
        depth = int(known) - db - need
        if depth < 1:
            raise NotRecognized(f'precision {known} leaves no room for {need} held-out coefficients')
        images = _images(curve, db)
        cols = [_condition_vector(x * images[k], curve, top, depth) for k in degrees]
        rows = [list(r) for r in zip(*cols)]
        kernel = fq_null_space(rows, curve.F)
        for vec in kernel:
            b = curve.from_monomials({k: c for k, c in zip(degrees, vec) if c})
            if b.deg != db:
                continue
            b = b.monic()
            a = try_else(recognize_A, None, NotRecognized)(x * curve.embed_infinity(b), curve, holdout)
            if a is None:
                continue
            logger.debug(f'recognized in K with denominator degree {db}')
            return KElem(curve, a * b.conj(), b.norm())
    raise NotRecognized(f'no denominator of degree <= {den_degree}')


def recognize_multiple(x: Scalar, base: Scalar, curve: Curve, den_degree: int = 6, holdout=None) -> KElem:
    """k in K with x = k * base"""
    return recognize_K(x / base, curve, den_degree, holdout)


def minimal_poly(images) -> list:
    """Coefficients (ascending, monic) of prod (w - x_R) over the given conjugates"""
    tower = images[0].tower
    coeffs = [tower.one()]
    for x in images:
        nxt = [tower.zero()] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i + 1] = nxt[i + 1] + c
            nxt[i] = nxt[i] - c * x
        coeffs = nxt
    return coeffs


def is_integral(images, curve: Curve, holdout=None) -> list:
    """The characteristic polynomial over A of an element given by all its conjugates.

    Raises NotRecognized when a coefficient is not in A.
    """
    return [recognize_A(c, curve, holdout) for c in minimal_poly(list(images))]


def recognize_H(images, generator_images, curve: Curve, den_degree: int = 6, holdout=None) -> list:
    """Coordinates c_k in K with x = sum c_k w^k, from all conjugates of x and w"""
    h = len(images)
    vander = [[w ** k for k in range(h)] for w in generator_images]
    coords = solve(vander, list(images))
    return [recognize_K(c, curve, den_degree, holdout) if not c.is_zero() else KElem(curve, curve.aelem(0, 0))
            for c in coords]


def recognize(x, curve: Curve, mode: str = 'K', base=None, bounds: int = 6, holdout=None, **kw):
    """Dispatch over recognition modes: A, K, multiple, H, integral"""
    if mode == 'A':
        return recognize_A(x, curve, holdout)
    if mode == 'K':
        return recognize_K(x, curve, bounds, holdout)
    if mode == 'multiple':
        return recognize_multiple(x, base, curve, bounds, holdout)
    if mode == 'H':
        return recognize_H(x, kw['generator_images'], curve, bounds, holdout)
    if mode == 'integral':
        return is_integral(x, curve, holdout)
    raise ValueError(f'unknown recognition mode {mode}')


if __name__ == '__main__':
    __import__('doctest').testmod(optionflags=4 | 8 | 32)
