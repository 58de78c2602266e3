"""Exact Gaussian elimination over a field.

Entries only need ``+ - * /`` and truthiness for zero tests, so the same code
runs over :class:`fractions.Fraction` and over sympy rational-function field
elements.  Matrices are lists of rows.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Sequence

from .errors import SingularSystem

Matrix = list[list[Any]]


def copy_matrix(a: Sequence[Sequence[Any]]) -> Matrix:
    return [list(row) for row in a]


def rref(a: Sequence[Sequence[Any]]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = copy_matrix(a)
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: Sequence[Sequence[Any]]) -> int:
    if not a:
        return 0
    return len(rref(a)[1])


def nullspace(a: Sequence[Sequence[Any]], ncols: int | None = None, one: Any = Fraction(1)) -> list[list[Any]]:
    """Basis of ``{x : a x = 0}``, one vector per free column."""
    if not a:
        n = ncols or 0
        zero = one - one
        return [[one if i == j else zero for i in range(n)] for j in range(n)]
    m, pivots = rref(a)
    n = len(m[0])
    zero = one - one
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        x = [zero] * n
        x[f] = one
        for row, pc in enumerate(pivots):
            x[pc] = -m[row][f]
        basis.append(x)
    return basis


def solve(a: Sequence[Sequence[Any]], b: Sequence[Any]) -> list[Any]:
    """Unique solution of ``a x = b``; raises :class:`SingularSystem` otherwise."""
    if not a:
        raise SingularSystem("empty system")
    n = len(a[0])
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    m, pivots = rref(aug)
    if n in pivots:
        raise SingularSystem("inconsistent linear system")
    if len(pivots) < n:
        raise SingularSystem(f"underdetermined system: rank {len(pivots)} < {n} unknowns")
    x = [None] * n
    for row, pc in enumerate(pivots):
        x[pc] = m[row][n]
    return x


def inverse(a: Sequence[Sequence[Any]], one: Any = Fraction(1)) -> Matrix:
    n = len(a)
    zero = one - one
    aug = [list(row) + [one if i == j else zero for j in range(n)] for i, row in enumerate(a)]
    m, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise SingularSystem("matrix is not invertible")
    return [row[n:] for row in m]


def determinant(a: Sequence[Sequence[Any]], one: Any = Fraction(1)) -> Any:
    m = copy_matrix(a)
    n = len(m)
    det = one
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c]), None)
        if p is None:
            return one - one
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det = det * m[c][c]
        inv = 1 / m[c][c]
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return det


def matmul(a: Sequence[Sequence[Any]], b: Sequence[Sequence[Any]]) -> Matrix:
    return [[sum((a[i][k] * b[k][j] for k in range(len(b))), a[i][0] * 0) for j in range(len(b[0]))] for i in range(len(a))]


def transpose(a: Sequence[Sequence[Any]]) -> Matrix:
    return [list(col) for col in zip(*a)]


def leading_minors(a: Sequence[Sequence[Any]], one: Any = Fraction(1)) -> list[Any]:
    return [determinant([row[:k] for row in a[:k]], one) for k in range(1, len(a) + 1)]
