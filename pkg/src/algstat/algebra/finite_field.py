"""Prime-field scalars and rank computation over F_p."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_PRIME = 2**61 - 1

# Largest prime below 2**23: residues multiply to < 2**46, so a float64
# dot product of length <= 128 is still exact.
BLAS_PRIME = 8388593
_BLAS_BLOCK = 128


@dataclass(frozen=True)
class FpElem:
    value: int
    p: int = DEFAULT_PRIME

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.p)

    def _coerce(self, other):
        if isinstance(other, FpElem):
            if other.p != self.p:
                raise ValueError("mixing different prime fields")
            return other.value
        return int(other) % self.p

    def __add__(self, other):
        return FpElem(self.value + self._coerce(other), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return FpElem(self.value - self._coerce(other), self.p)

    def __rsub__(self, other):
        return FpElem(self._coerce(other) - self.value, self.p)

    def __mul__(self, other):
        return FpElem(self.value * self._coerce(other), self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FpElem(-self.value, self.p)

    def inverse(self):
        if self.value == 0:
            raise ZeroDivisionError("zero has no inverse in F_p")
        return FpElem(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        return self * FpElem(self._coerce(other), self.p).inverse()

    def __rtruediv__(self, other):
        return FpElem(self._coerce(other), self.p) * self.inverse()

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        return FpElem(pow(self.value, k, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, FpElem):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"FpElem({self.value}, p={self.p})"


def _as_int_rows(M, p):
    rows = []
    for row in M:
        rows.append([int(x) % p for x in row])
    return rows


def _rank_python(rows, p):
    """Gaussian elimination on Python ints; works for any prime."""
    A = np.array(rows, dtype=object)
    if A.size == 0:
        return 0
    m, n = A.shape
    r = 0
    for c in range(n):
        if r == m:
            break
        col = A[r:, c]
        nz = np.nonzero(col % p)[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        inv = pow(int(A[r, c]), -1, p)
        A[r, c:] = (A[r, c:] * inv) % p
        below = A[r + 1:, c] % p
        idx = np.nonzero(below)[0]
        if idx.size:
            rows_i = idx + r + 1
            A[rows_i, c:] = (A[rows_i, c:] - np.outer(below[idx], A[r, c:])) % p
        r += 1
    return r


def _inv_mod_vec(a, p):
    """Elementwise inverse mod p for an int64 array of nonzero residues."""
    result = np.ones_like(a)
    base = a.copy()
    e = p - 2
    while e:
        if e & 1:
            result = (result * base) % p
        base = (base * base) % p
        e >>= 1
    return result


def _panel_pivots(P, p):
    """Row-echelon pivots of an int64 panel (rows x b) mod p.

    Returns (pivot_rows, pivot_cols) in elimination order.
    """
    P = P.copy()
    m, b = P.shape
    used = np.zeros(m, dtype=bool)
    piv_rows, piv_cols = [], []
    for c in range(b):
        col = P[:, c]
        cand = np.nonzero((col != 0) & ~used)[0]
        if cand.size == 0:
            continue
        r = int(cand[0])
        used[r] = True
        piv_rows.append(r)
        piv_cols.append(c)
        if c + 1 == b:
            break
        inv = pow(int(P[r, c]), -1, p)
        prow = (P[r, c + 1:] * inv) % p
        others = np.nonzero((col != 0) & ~used)[0]
        if others.size:
            P[np.ix_(others, np.arange(c + 1, b))] = (
                P[np.ix_(others, np.arange(c + 1, b))] - np.outer(col[others], prow) % p
            ) % p
            P[others, c] = 0
    return piv_rows, piv_cols


def _small_inverse_mod(S, p):
    """Inverse of a small invertible int64 matrix mod p (Gauss-Jordan)."""
    k = S.shape[0]
    A = np.concatenate([S % p, np.eye(k, dtype=np.int64)], axis=1)
    for c in range(k):
        nz = np.nonzero(A[c:, c])[0]
        piv = c + int(nz[0])
        if piv != c:
            A[[c, piv]] = A[[piv, c]]
        inv = pow(int(A[c, c]), -1, p)
        A[c] = (A[c] * inv) % p
        f = A[:, c].copy()
        f[c] = 0
        nzr = np.nonzero(f)[0]
        if nzr.size:
            A[nzr] = (A[nzr] - (np.outer(f[nzr], A[c]) % p)) % p
    return A[:, k:]


def _mulmod_blas(X, Y, p):
    """(X @ Y) mod p for float64 residue matrices, chunked so sums stay exact."""
    k = X.shape[1]
    out = None
    for s in range(0, k, _BLAS_BLOCK):
        part = X[:, s:s + _BLAS_BLOCK] @ Y[s:s + _BLAS_BLOCK]
        np.fmod(part, p, out=part)
        if out is None:
            out = part
        else:
            out += part
            np.fmod(out, p, out=out)
    return out


def _rank_blocked(M, p, block=_BLAS_BLOCK):
    """Rank mod a prime < 2**23 via panel pivoting and BLAS Schur updates."""
    if p >= 2**23:
        raise ValueError("blocked elimination needs p < 2**23")
    T = np.asarray(M, dtype=np.float64)
    if T.ndim != 2 or T.size == 0:
        return 0
    T = np.mod(T, p)
    rank = 0
    while T.shape[0] and T.shape[1]:
        b = min(block, T.shape[1])
        panel = T[:, :b].astype(np.int64)
        prow, pcol = _panel_pivots(panel, p)
        k = len(prow)
        if k == 0:
            T = T[:, b:]
            continue
        rank += k
        rest_rows = np.setdiff1d(np.arange(T.shape[0]), prow)
        rest_cols = np.setdiff1d(np.arange(T.shape[1]), pcol)
        if rest_rows.size == 0 or rest_cols.size == 0:
            break
        S_inv = _small_inverse_mod(T[np.ix_(prow, pcol)].astype(np.int64), p).astype(np.float64)
        X = _mulmod_blas(S_inv, T[np.ix_(prow, rest_cols)], p)
        left = T[np.ix_(rest_rows, pcol)]
        T = T[np.ix_(rest_rows, rest_cols)]
        T -= _mulmod_blas(left, X, p)
        np.mod(T, p, out=T)
        keep = np.any(T != 0, axis=0)
        if not keep.all():
            T = T[:, keep]
    return rank


def rank_mod_p(M, p: int = DEFAULT_PRIME) -> int:
    """Rank of an integer (or :class:`FpElem`) matrix over F_p.

    Small primes (< 2**23) take a blocked float64 path that scales to
    matrices of size ~10^4; larger primes use exact Python integers.
    """
    if isinstance(M, np.ndarray) and M.dtype != object and p < 2**23:
        return _rank_blocked(M, p)
    rows = _as_int_rows(M, p)
    if not rows:
        return 0
    if p < 2**23:
        return _rank_blocked(np.array(rows, dtype=np.float64), p)
    return _rank_python(rows, p)


def random_invertible(n, p, rng):
    """Uniform n x n matrix over F_p, resampled until invertible."""
    while True:
        g = rng.integers(0, p, size=(n, n), dtype=np.int64)
        if _rank_python(g.tolist(), p) == n:
            return g
