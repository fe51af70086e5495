"""Search for a positive definite matrix realising a prescribed CI pattern.

Three phases: a penalised numerical search over correlation matrices
Sigma = D^-1/2 L L^T D^-1/2, continued-fraction rounding at increasing
precision followed by exact pivot corrections, and an exact certificate
from :mod:`algstat.gaussian_ci.certify`.  Failure means the budget ran out,
never that the pattern is not representable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import least_squares, minimize

from algstat.gaussian_ci.axioms import is_gaussoid
from algstat.gaussian_ci.certify import certify_witness
from algstat.gaussian_ci.covariance import CovMatrix, apm
from algstat.gaussian_ci.statements import GaussoidCandidate, all_statements

DENOMINATOR_LADDER = (10**3, 10**6, 10**9)
PENALTY_WEIGHT = 1.0
SEPARATION = 1e-2


@dataclass
class RepresentationResult:
    found: bool
    witness: CovMatrix | None = None
    reason: str = ""
    starts_used: int = 0
    denominator: int | None = None
    log: list = field(default_factory=list)

    def to_json(self):
        return {
            "found": self.found,
            "witness": self.witness.to_json() if self.witness else None,
            "reason": self.reason,
            "starts_used": self.starts_used,
            "denominator_bound": self.denominator,
        }


class _MinorBatch:
    """Numerical almost-principal minors of a float matrix, grouped by |K|."""

    def __init__(self, n):
        self.n = n
        stmts = all_statements(n)
        self.groups = []
        for size in range(n - 1):
            pos = [b for b, s in enumerate(stmts) if len(s.K) == size]
            rows = np.array([[stmts[b].i - 1, *[k - 1 for k in stmts[b].K]] for b in pos])
            cols = np.array([[stmts[b].j - 1, *[k - 1 for k in stmts[b].K]] for b in pos])
            self.groups.append((np.array(pos), rows, cols))
        self.count = len(stmts)

    def __call__(self, S):
        out = np.empty(self.count)
        for pos, rows, cols in self.groups:
            sub = S[rows[:, :, None], cols[:, None, :]]
            out[pos] = np.linalg.det(sub)
        return out


def _correlation(theta, n):
    L = np.zeros((n, n))
    L[np.tril_indices(n)] = theta
    S = L @ L.T
    d = np.sqrt(np.clip(np.diag(S), 1e-300, None))
    return S / np.outer(d, d)


def _exact_pivot(entries, n, members, rounds=4):
    """Zero every member minor exactly by solving for its own sigma_ij.

    [i _||_ j | K] is affine in sigma_ij with coefficient det Sigma_K.
    """
    S = CovMatrix.from_matrix(entries)
    for _ in range(rounds):
        changed = False
        for s in sorted(members, key=lambda s: len(s.K)):
            val = apm(S, s)
            if val == 0:
                continue
            coef = S.principal_minor(s.K)
            if coef == 0:
                return None
            M = S.matrix()
            M[s.i - 1][s.j - 1] -= val / coef
            M[s.j - 1][s.i - 1] = M[s.i - 1][s.j - 1]
            S = CovMatrix.from_matrix(M)
            changed = True
        if not changed:
            return S
    return S if all(apm(S, s) == 0 for s in members) else None


def find_representation(S: GaussoidCandidate, budget=50, seed=0, check_axioms=True):
    """Try to realise exactly the statements of ``S`` as vanishing minors of a PD matrix."""
    n = S.n
    members = S.statements()
    if len(members) == len(all_statements(n)):
        witness = CovMatrix.identity(n)
        ok, why = certify_witness(witness.matrix(), n, [(s.i, s.j, s.K) for s in members])
        return RepresentationResult(ok, witness if ok else None, why, 0, 1)
    if check_axioms and not is_gaussoid(S):
        return RepresentationResult(False, None, "not a gaussoid, hence not representable", 0)
    batch = _MinorBatch(n)
    inside = np.zeros(batch.count, dtype=bool)
    inside[[b for b, s in enumerate(all_statements(n)) if s in set(members)]] = True
    triples = [(s.i, s.j, s.K) for s in members]

    def objective(theta):
        m = batch(_correlation(theta, n))
        return np.sum(m[inside] ** 2) - PENALTY_WEIGHT * np.sum(np.minimum(m[~inside] ** 2, SEPARATION**2))

    def member_residual(theta):
        return batch(_correlation(theta, n))[inside]

    log = []
    children = np.random.SeedSequence(seed).spawn(budget)
    for start, child in enumerate(children, 1):
        rng = np.random.default_rng(child)
        theta0 = rng.standard_normal(n * (n + 1) // 2)
        theta0[[k * (k + 3) // 2 for k in range(n)]] = np.abs(theta0[[k * (k + 3) // 2 for k in range(n)]]) + 0.5
        theta = minimize(objective, theta0, method="BFGS", options={"gtol": 1e-10, "maxiter": 2000}).x
        if inside.any():
            theta = least_squares(member_residual, theta, xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=500).x
        C = _correlation(theta, n)
        sep = batch(C)[~inside]
        log.append({"start": start, "member_max": float(np.max(np.abs(batch(C)[inside]), initial=0.0)),
                    "nonmember_min": float(np.min(np.abs(sep), initial=np.inf))})
        for den in DENOMINATOR_LADDER:
            R = [[Fraction(1) if a == b else Fraction(float(C[a, b])).limit_denominator(den) for b in range(n)]
                 for a in range(n)]
            for a in range(n):
                for b in range(a):
                    R[a][b] = R[b][a]
            W = _exact_pivot(R, n, members)
            if W is None:
                continue
            ok, why = certify_witness(W.matrix(), n, triples)
            if ok:
                return RepresentationResult(True, W, why, start, den, log)
    return RepresentationResult(False, None, f"search failure after {budget} starts (not a non-representability proof)",
                                budget, None, log)
