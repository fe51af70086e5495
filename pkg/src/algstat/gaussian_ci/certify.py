"""Stand-alone exact check of a representation witness.

Deliberately self-contained: its own determinant, its own submatrix
extraction and its own statement enumeration, so a bug in the search path
cannot certify its own output.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations


def _det(rows):
    A = [[Fraction(x) for x in r] for r in rows]
    n = len(A)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det *= A[c][c]
        for r in range(c + 1, n):
            f = A[r][c] / A[c][c]
            if f:
                for t in range(c, n):
                    A[r][t] -= f * A[c][t]
    return det


def certify_witness(matrix, n, members):
    """Exact check that ``matrix`` is PD and vanishes on exactly ``members``.

    ``matrix`` is an n x n nested list of rationals, ``members`` an iterable
    of (i, j, K) triples with 1-based indices.  Returns (ok, reason).
    """
    M = [[Fraction(x) for x in row] for row in matrix]
    if len(M) != n or any(len(r) != n for r in M):
        return False, "wrong shape"
    for a in range(n):
        for b in range(n):
            if M[a][b] != M[b][a]:
                return False, f"not symmetric at ({a + 1}, {b + 1})"
    for k in range(1, n + 1):
        if _det([row[:k] for row in M[:k]]) <= 0:
            return False, f"leading principal minor of order {k} is not positive"
    want = {(min(i, j), max(i, j), tuple(sorted(K))) for i, j, K in members}
    for i, j in combinations(range(1, n + 1), 2):
        others = [x for x in range(1, n + 1) if x not in (i, j)]
        for size in range(len(others) + 1):
            for K in combinations(others, size):
                rows = [i - 1] + [k - 1 for k in K]
                cols = [j - 1] + [k - 1 for k in K]
                zero = _det([[M[r][c] for c in cols] for r in rows]) == 0
                inside = (i, j, K) in want
                if zero and not inside:
                    return False, f"[{i} _||_ {j} | {set(K) or '{}'}] vanishes but is not a member"
                if inside and not zero:
                    return False, f"[{i} _||_ {j} | {set(K) or '{}'}] is a member but does not vanish"
    return True, "certified"
