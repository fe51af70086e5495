"""Exact covariance matrices, almost-principal minors and their vanishing patterns."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from algstat.algebra.linalg import det_exact, leading_principal_minors
from algstat.gaussian_ci.statements import CIStatement, GaussoidCandidate, all_statements
from algstat.io import format_rat, parse_rat


class NotPositiveDefinite(ValueError):
    pass


@dataclass(frozen=True)
class CovMatrix:
    """Symmetric matrix over Q given by its row-major upper triangle (diagonal included)."""

    n: int
    upper: tuple

    def __post_init__(self):
        vals = tuple(Fraction(x) for x in self.upper)
        if len(vals) != self.n * (self.n + 1) // 2:
            raise ValueError(f"need {self.n * (self.n + 1) // 2} upper-triangle entries for n = {self.n}")
        object.__setattr__(self, "upper", vals)

    @classmethod
    def from_matrix(cls, M):
        n = len(M)
        for a in range(n):
            for b in range(a):
                if Fraction(M[a][b]) != Fraction(M[b][a]):
                    raise ValueError("matrix is not symmetric")
        return cls(n, tuple(M[a][b] for a in range(n) for b in range(a, n)))

    def matrix(self):
        n = self.n
        M = [[Fraction(0)] * n for _ in range(n)]
        it = iter(self.upper)
        for a in range(n):
            for b in range(a, n):
                M[a][b] = M[b][a] = next(it)
        return M

    def __getitem__(self, ab):
        """1-based entry sigma_ab."""
        a, b = sorted(ab)
        a -= 1
        b -= 1
        return self.upper[a * self.n - a * (a - 1) // 2 + (b - a)]

    def pd_certificate(self):
        """Leading principal minors; all positive iff the matrix is positive definite."""
        return leading_principal_minors(self.matrix())

    def is_positive_definite(self):
        return all(m > 0 for m in self.pd_certificate())

    def require_pd(self):
        minors = self.pd_certificate()
        bad = [k + 1 for k, m in enumerate(minors) if m <= 0]
        if bad:
            raise NotPositiveDefinite(f"leading principal minor(s) of order {bad} are not positive")

    def principal_minor(self, I):
        """det of the principal submatrix on the 1-based index set I (1 for I empty)."""
        I = sorted(I)
        if not I:
            return Fraction(1)
        M = self.matrix()
        return det_exact([[M[a - 1][b - 1] for b in I] for a in I])

    def to_json(self):
        return {"n": self.n, "upper": [format_rat(x) for x in self.upper]}

    @classmethod
    def from_json(cls, data):
        return cls(int(data["n"]), tuple(parse_rat(x) for x in data["upper"]))

    @classmethod
    def identity(cls, n):
        return cls.from_matrix([[int(a == b) for b in range(n)] for a in range(n)])


def _as_cov(S):
    return S if isinstance(S, CovMatrix) else CovMatrix.from_matrix(S)


def apm_submatrix(S, s: CIStatement):
    """Rows {i} + K and columns {j} + K, with i (resp. j) first and K increasing."""
    S = _as_cov(S)
    if not s.valid_for(S.n):
        raise ValueError(f"statement {s} is not valid for n = {S.n}")
    rows = [s.i, *s.K]
    cols = [s.j, *s.K]
    return [[S[a, b] for b in cols] for a in rows]


def apm(S, s) -> Fraction:
    """The almost-principal minor [i _||_ j | K] of S, exactly."""
    if not isinstance(s, CIStatement):
        s = CIStatement.parse(s) if isinstance(s, str) else CIStatement(*s)
    return det_exact(apm_submatrix(S, s))


def gaussoid_of(S) -> GaussoidCandidate:
    """Statements whose almost-principal minor vanishes exactly."""
    S = _as_cov(S)
    S.require_pd()
    bits = 0
    for b, s in enumerate(all_statements(S.n)):
        if apm(S, s) == 0:
            bits |= 1 << b
    return GaussoidCandidate(S.n, bits)


def tight_faces(S) -> GaussoidCandidate:
    """Triples with det S_iK * det S_jK == det S_ijK * det S_K, exactly."""
    S = _as_cov(S)
    S.require_pd()
    cache = {}

    def pm(I):
        key = frozenset(I)
        if key not in cache:
            cache[key] = S.principal_minor(key)
        return cache[key]

    bits = 0
    for b, s in enumerate(all_statements(S.n)):
        K = set(s.K)
        if pm(K | {s.i}) * pm(K | {s.j}) == pm(K | {s.i, s.j}) * pm(K):
            bits |= 1 << b
    return GaussoidCandidate(S.n, bits)


def random_pd(n, rng, height=3, zero_prob=0.0, blocks=None):
    """Exact PD matrix L L^T from a random integer lower-triangular L.

    ``zero_prob`` zeroes off-diagonal entries of L at random; ``blocks``
    (a list of index lists, 0-based) makes L block diagonal after permuting.
    """
    L = np.zeros((n, n), dtype=object)
    for a in range(n):
        L[a, a] = int(rng.integers(1, height + 1))
        for b in range(a):
            if rng.random() >= zero_prob:
                L[a, b] = int(rng.integers(-height, height + 1))
            else:
                L[a, b] = 0
    if blocks is not None:
        label = {}
        for t, blk in enumerate(blocks):
            for x in blk:
                label[x] = t
        for a in range(n):
            for b in range(a):
                if label.get(a) != label.get(b):
                    L[a, b] = 0
    M = (L @ L.T).tolist()
    return CovMatrix.from_matrix([[Fraction(x) for x in row] for row in M])


def subsets(ground):
    ground = list(ground)
    for r in range(len(ground) + 1):
        yield from combinations(ground, r)
