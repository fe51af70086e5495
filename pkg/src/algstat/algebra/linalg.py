"""Exact determinants, adjugates and ranks for small matrices.

Matrices are plain nested sequences (rows of entries). Entries may be ints,
Fractions or :class:`MPoly`; results are returned as lists of lists.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from algstat.algebra.polynomial import MPoly


class DimensionError(ValueError):
    pass


def _check_square(M):
    n = len(M)
    if any(len(row) != n for row in M):
        raise DimensionError(f"expected a square matrix, got {n} rows of lengths {[len(r) for r in M]}")
    return n


def _is_symbolic(M):
    return any(isinstance(x, MPoly) for row in M for x in row)


def _bareiss(M):
    n = len(M)
    A = [list(row) for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for r in range(k + 1, n):
                if A[r][k] != 0:
                    A[k], A[r] = A[r], A[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            row_i, row_k = A[i], A[k]
            for j in range(k + 1, n):
                num = row_i[j] * akk - aik * row_k[j]
                if isinstance(num, int) and isinstance(prev, int):
                    row_i[j] = num // prev
                else:
                    row_i[j] = num / prev
            row_i[k] = 0
        prev = akk
    return sign * A[n - 1][n - 1]


def _laplace(M):
    """Expansion by minors along rows, memoized on the column subset."""
    n = len(M)
    zero = next((x for row in M for x in row if isinstance(x, MPoly)), None)
    zero = MPoly(zero.variables) if zero is not None else 0

    @lru_cache(maxsize=None)
    def minor(cols):
        row = n - len(cols)
        if len(cols) == 1:
            return M[row][cols[0]]
        total = zero
        for pos, c in enumerate(cols):
            entry = M[row][c]
            if entry == 0:
                continue
            sub = minor(cols[:pos] + cols[pos + 1:])
            if pos % 2:
                total = total - entry * sub
            else:
                total = total + entry * sub
        return total

    return minor(tuple(range(n)))


def det_exact(M):
    """Exact determinant.

    Numeric entries go through fraction-free Bareiss elimination; polynomial
    entries use memoized expansion by minors.
    """
    n = _check_square(M)
    if n == 0:
        return 1
    if _is_symbolic(M):
        return _laplace([list(r) for r in M])
    return _bareiss(M)


def _minor_matrix(M, i, j):
    return [row[:j] + row[j + 1:] for k, row in enumerate(M) if k != i]


def adjugate(M):
    """Classical adjoint: ``M @ adjugate(M) == det(M) * I`` even when singular."""
    n = _check_square(M)
    M = [list(r) for r in M]
    if n == 1:
        one = MPoly.const(M[0][0].variables, 1) if isinstance(M[0][0], MPoly) else 1
        return [[one]]
    adj = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            d = det_exact(_minor_matrix(M, i, j))
            adj[j][i] = d if (i + j) % 2 == 0 else -d
    return adj


def matmul(A, B):
    m, k = len(A), len(B)
    if any(len(r) != k for r in A):
        raise DimensionError("inner dimensions do not match")
    n = len(B[0])
    out = []
    for i in range(m):
        row = []
        for j in range(n):
            s = A[i][0] * B[0][j]
            for t in range(1, k):
                s = s + A[i][t] * B[t][j]
            row.append(s)
        out.append(row)
    return out


def matsub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def identity(n, one=1):
    return [[one if i == j else 0 for j in range(n)] for i in range(n)]


def rank_exact(M) -> int:
    """Rank over Q by fraction Gaussian elimination."""
    A = [[Fraction(x) for x in row] for row in M]
    if not A:
        return 0
    m, n = len(A), len(A[0])
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        for i in range(r + 1, m):
            if A[i][c] != 0:
                f = A[i][c] / A[r][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        r += 1
        if r == m:
            break
    return r


def leading_principal_minors(M):
    return [det_exact([row[:k] for row in M[:k]]) for k in range(1, len(M) + 1)]
