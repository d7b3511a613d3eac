"""List-of-lists matrices over scalars, t-polynomials or finite fields.

Entries only need ring arithmetic; elimination routines pivot on the entry
of least valuation so that scalar precision is spent where it matters.
"""
import logging

from gzl.exception import DivisionByApparentZero
from gzl.scalarutils import Scalar
from gzl.seriesutils import is_zero, one_like, residual_of, twist, zero_like

logger = logging.getLogger(__name__)

__all__ = [
    'dot',
    'matident',
    'matzero',
    'matdim',
    'matadd',
    'matsub',
    'matscale',
    'matapply',
    'matfrob',
    'transpose',
    'matprod',
    'matvec',
    'matdet',
    'gjinv',
    'solve',
    'null_space',
    'matresidual',
]


def dot(X, Y):
    """Dot product of vectors X and Y.

    >>> dot([1, 2, 3], [3, 2, 1])
    10
    """
    acc = None
    for x, y in zip(X, Y):
        acc = x * y if acc is None else acc + x * y
    return 0 if acc is None else acc


def matident(n, one=1, zero=None):
    """Identity matrix of size n

    >>> matident(2)
    [[1, 0], [0, 1]]
    """
    zero = zero_like(one) if zero is None else zero
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def matzero(m, n=None, zero=0):
    """Zero matrix of m rows and n columns

    >>> matzero(2, 3)
    [[0, 0, 0], [0, 0, 0]]
    """
    n = m if n is None else n
    return [[zero] * n for _ in range(m)]


def matdim(A):
    """Rows and columns of A

    >>> matdim([[1, 2, 3], [4, 5, 6]])
    (2, 3)
    """
    return len(A), len(A[0]) if A else 0


def matadd(A, B):
    """Entrywise sum

    >>> matadd([[1, 2]], [[3, 4]])
    [[4, 6]]
    """
    if matdim(A) != matdim(B):
        raise AssertionError('dim(A) <> dim(B)')
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def matsub(A, B):
    """Entrywise difference

    >>> matsub([[1, 2]], [[3, 4]])
    [[-2, -2]]
    """
    if matdim(A) != matdim(B):
        raise AssertionError('dim(A) <> dim(B)')
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def matscale(A, c):
    return [[a * c for a in row] for row in A]


def matapply(A, func):
    """Apply func to every entry"""
    return [[func(a) for a in row] for row in A]


def matfrob(A, k=1):
    """Entrywise twist A^(k)"""
    return matapply(A, lambda a: twist(a, k))


def transpose(A):
    """Transpose of A

    >>> transpose([[1, 2, 3], [4, 5, 6]])
    [[1, 4], [2, 5], [3, 6]]
    """
    return [list(col) for col in zip(*A)]


def matprod(A, B):
    """Matrix product

    >>> matprod([[1, 2], [3, 4]], [[0, 1], [1, 0]])
    [[2, 1], [4, 3]]
    """
    m, n = matdim(A)
    p, q = matdim(B)
    if n != p:
        raise AssertionError('col(A) <> row(B)')
    return [[dot(A[i], [B[k][j] for k in range(p)]) for j in range(q)] for i in range(m)]


def matvec(A, x):
    """A applied to the vector x

    >>> matvec([[1, 2], [3, 4]], [1, 1])
    [3, 7]
    """
    return [dot(row, x) for row in A]


def _pivot_key(x):
    if isinstance(x, Scalar):
        return x.valuation()
    return 0


def _pick_pivot(rows, col, start):
    best, key = None, None
    for r in range(start, len(rows)):
        x = rows[r][col]
        if is_zero(x):
            continue
        k = _pivot_key(x)
        if best is None or k < key:
            best, key = r, k
    return best


def _inverse(x):
    return one_like(x) / x


def matdet(AA):
    """Determinant by elimination (no division-free tricks: entries form a field)

    >>> matdet([[2, 1], [1, 1]])
    1.0
    """
    A = [row[:] for row in AA]
    n = len(A)
    det = None
    sign = 1
    for i in range(n):
        r = _pick_pivot(A, i, i)
        if r is None:
            return zero_like(A[0][0]) if n else 0
        if r != i:
            A[i], A[r] = A[r], A[i]
            sign = -sign
        piv = A[i][i]
        det = piv if det is None else det * piv
        inv = _inverse(piv)
        for k in range(i + 1, n):
            m = A[k][i] * inv
            if is_zero(m):
                continue
            for j in range(i, n):
                A[k][j] = A[k][j] - m * A[i][j]
    if det is None:
        return 1
    return det if sign == 1 else -det


def gjinv(AA):
    """Inverse of square matrix by Gauss-Jordan reduction

    >>> gjinv([[2, 1], [1, 1]])
    [[1.0, -1.0], [-1.0, 2.0]]
    """
    A = [row[:] for row in AA]
    n = len(AA)
    one = one_like(A[0][0])
    B = matident(n, one, zero_like(A[0][0]))
    for i in range(n):
        r = _pick_pivot(A, i, i)
        if r is None:
            raise DivisionByApparentZero(f'singular matrix at column {i}')
        A[i], A[r] = A[r], A[i]
        B[i], B[r] = B[r], B[i]
        m = _inverse(A[i][i])
        A[i] = [a * m for a in A[i]]
        B[i] = [b * m for b in B[i]]
        for k in range(n):
            if k == i:
                continue
            m = A[k][i]
            if is_zero(m):
                continue
            A[k] = [a - m * c for a, c in zip(A[k], A[i])]
            B[k] = [b - m * c for b, c in zip(B[k], B[i])]
    return B


def solve(A, b):
    """x with A x = b for square invertible A"""
    return matvec(gjinv(A), b)


def null_space(AA, ncols=None):
    """Basis of {x : A x = 0} from the reduced row echelon form.

    Columns are scanned left to right with least-valuation pivots; each
    basis vector has a 1 in its free column and zeros in the other free
    columns. Returns (basis, pivots).

    >>> basis, pivots = null_space([[1, 1, 0], [0, 0, 1]])
    >>> pivots, len(basis), basis[0][:2]
    ([0, 2], 1, [-1.0, 1])
    """
    A = [row[:] for row in AA]
    m = len(A)
    n = ncols if ncols is not None else (len(A[0]) if A else 0)
    pivots = []
    row = 0
    for col in range(n):
        if row >= m:
            break
        r = _pick_pivot(A, col, row)
        if r is None:
            continue
        A[row], A[r] = A[r], A[row]
        inv = _inverse(A[row][col])
        A[row] = [a * inv for a in A[row]]
        for k in range(m):
            if k == row:
                continue
            f = A[k][col]
            if is_zero(f):
                continue
            A[k] = [a - f * c for a, c in zip(A[k], A[row])]
        pivots.append(col)
        row += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    sample = next((a for r in A for a in r), 0)
    one, zero = one_like(sample), zero_like(sample)
    for fc in free:
        vec = [zero] * n
        vec[fc] = one
        for i, pc in enumerate(pivots):
            vec[pc] = -A[i][fc]
        basis.append(vec)
    logger.debug(f'null space: {len(pivots)} pivots, {len(basis)} free columns of {n}')
    return basis, pivots


def matresidual(A, B=None):
    """Least valuation of A - B (of A when B is omitted), inf when exact"""
    D = A if B is None else matsub(A, B)
    return residual_of(D)


if __name__ == '__main__':
    __import__('doctest').testmod(optionflags=4 | 8 | 32)
