"""Entropy coordinates H_I = -log det Sigma_I and the submodular inequalities."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

from algstat.gaussian_ci.covariance import _as_cov
from algstat.gaussian_ci.statements import all_statements

SUBMODULAR_TOL = 1e-9


def _mask(I):
    m = 0
    for x in I:
        m |= 1 << (x - 1)
    return m


def _log_fraction(q):
    # logs of numerator and denominator separately so huge integers do not overflow floats
    return math.log(q.numerator) - math.log(q.denominator)


@dataclass(frozen=True)
class EntropyVector:
    """Values indexed by subset bitmask: bit t set means element t + 1 belongs to I."""

    n: int
    values: tuple

    def __post_init__(self):
        if len(self.values) != 1 << self.n:
            raise ValueError("need one value per subset")
        if self.values[0] != 0:
            raise ValueError("H of the empty set must be 0")

    def __getitem__(self, I):
        return self.values[_mask(I)]

    def to_json(self):
        out = {}
        for m, v in enumerate(self.values):
            out["{" + ",".join(str(t + 1) for t in range(self.n) if m >> t & 1) + "}"] = v
        return {"n": self.n, "H": out}


def entropy_vector(S) -> EntropyVector:
    S = _as_cov(S)
    S.require_pd()
    vals = [0.0] * (1 << S.n)
    for r in range(1, S.n + 1):
        for I in combinations(range(1, S.n + 1), r):
            vals[_mask(I)] = -_log_fraction(S.principal_minor(I))
    return EntropyVector(S.n, tuple(vals))


@dataclass
class SubmodularReport:
    violated: list
    tight: list
    slack: list
    tol: float

    def to_json(self):
        return {
            "tol": self.tol,
            "violated": [[str(s), v] for s, v in self.violated],
            "tight": [str(s) for s, _ in self.tight],
            "n_slack": len(self.slack),
        }


def submodular_check(h: EntropyVector, tol=SUBMODULAR_TOL) -> SubmodularReport:
    """Classify H_iK + H_jK - H_ijK - H_K for every triple as violated, tight or slack.

    The gap is non-positive on the submodular cone: violated means gap > tol.
    """
    violated, tight, slack = [], [], []
    for s in all_statements(h.n):
        K = set(s.K)
        gap = h[K | {s.i}] + h[K | {s.j}] - h[K | {s.i, s.j}] - h[K]
        if gap > tol:
            violated.append((s, gap))
        elif abs(gap) <= tol:
            tight.append((s, gap))
        else:
            slack.append((s, gap))
    return SubmodularReport(violated, tight, slack, tol)


def vector_from_function(n, f) -> EntropyVector:
    """EntropyVector from a Python function of a frozenset of 1-based indices."""
    vals = [0.0] * (1 << n)
    for r in range(1, n + 1):
        for I in combinations(range(1, n + 1), r):
            vals[_mask(I)] = float(f(frozenset(I)))
    return EntropyVector(n, tuple(vals))



