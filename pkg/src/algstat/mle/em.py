"""EM for the rank-r latent class model p_ij = sum_l pi_l a_il b_jl."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations

import numpy as np

from algstat.mle.likelihood import DomainError

# float slack for the per-iteration monotonicity assertion
MONOTONE_SLACK = 1e-9


@dataclass
class EMResult:
    best_table: np.ndarray
    log_likelihood: float
    n_starts: int
    n_improvals: int
    iterations: np.ndarray = field(repr=False, default=None)
    final_log_likelihoods: np.ndarray = field(repr=False, default=None)
    traces: list | None = field(repr=False, default=None)

    def to_json(self):
        return {
            "best_table": self.best_table.tolist(),
            "log_likelihood": self.log_likelihood,
            "n_starts": self.n_starts,
            "n_improvals": self.n_improvals,
            "iterations_max": int(self.iterations.max()) if self.iterations is not None else None,
        }


def _init(m, n, r, n_starts, seed):
    pi = np.empty((n_starts, r))
    a = np.empty((n_starts, m, r))
    b = np.empty((n_starts, n, r))
    for s, child in enumerate(np.random.SeedSequence(seed).spawn(n_starts)):
        g = np.random.default_rng(child)
        pi[s] = g.uniform(0.2, 1.8, r)
        a[s] = g.uniform(0.2, 1.8, (m, r))
        b[s] = g.uniform(0.2, 1.8, (n, r))
    pi /= pi.sum(axis=1, keepdims=True)
    a /= a.sum(axis=1, keepdims=True)
    b /= b.sum(axis=1, keepdims=True)
    return pi, a, b


def _table(pi, a, b):
    return np.einsum("sl,sil,sjl->sij", pi, a, b)


def _loglik(P, U, N):
    with np.errstate(divide="ignore"):
        logs = np.where(U > 0, np.log(np.where(P > 0, P, 1.0)), 0.0)
    return np.einsum("ij,sij->s", U, logs) - N * np.log(P.sum(axis=(1, 2)))


def em_low_rank(u, r, n_starts=100, max_iters=10000, tol=1e-12, seed=0, keep_traces=False):
    """Run EM from ``n_starts`` random positive factorizations and keep the best.

    Each start stops once its log-likelihood improves by less than ``tol``.
    The log-likelihood is asserted non-decreasing at every step of every
    start (up to a floating-point slack of ``MONOTONE_SLACK``).
    """
    U = np.asarray(u, dtype=float)
    if r < 1:
        raise DomainError("r must be at least 1")
    if U.ndim != 2 or np.any(U < 0):
        raise DomainError("u must be a nonnegative matrix")
    N = U.sum()
    if N <= 0:
        raise DomainError("zero total count")
    m, n = U.shape
    pi, a, b = _init(m, n, r, n_starts, seed)
    P = _table(pi, a, b)
    ll = _loglik(P, U, N)
    active = np.ones(n_starts, dtype=bool)
    iters = np.zeros(n_starts, dtype=int)
    traces = [[float(x)] for x in ll] if keep_traces else None
    for _ in range(max_iters):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        pa, aa, ba, Pa = pi[idx], a[idx], b[idx], P[idx]
        # E-step: expected counts per cell and latent class
        with np.errstate(invalid="ignore", divide="ignore"):
            ratio = np.where(Pa > 0, U / Pa, 0.0)
        post = np.einsum("sl,sil,sjl,sij->sijl", pa, aa, ba, ratio)
        tot = post.sum(axis=(1, 2))
        pa = tot / N
        with np.errstate(invalid="ignore", divide="ignore"):
            aa = np.nan_to_num(post.sum(axis=2) / tot[:, None, :])
            ba = np.nan_to_num(post.sum(axis=1) / tot[:, None, :])
        Pa = _table(pa, aa, ba)
        new = _loglik(Pa, U, N)
        drop = ll[idx] - new
        assert np.all(drop <= MONOTONE_SLACK * np.maximum(1.0, np.abs(ll[idx]))), (
            f"EM log-likelihood decreased by {drop.max():.3e}"
        )
        pi[idx], a[idx], b[idx], P[idx] = pa, aa, ba, Pa
        improvement = new - ll[idx]
        ll[idx] = new
        iters[idx] += 1
        if keep_traces:
            for k, s in enumerate(idx):
                traces[s].append(float(new[k]))
        active[idx[improvement < tol]] = False
    best_so_far, improvals = -np.inf, 0
    for v in ll:
        if v > best_so_far + 1e-12 * max(1.0, abs(v)):
            best_so_far, improvals = v, improvals + 1
    best = int(np.argmax(ll))
    table = P[best] / P[best].sum()
    return EMResult(table, float(ll[best]), n_starts, improvals, iters, ll.copy(), traces)


def equal_up_to_simultaneous_permutation(A, B, tol):
    """True if some permutation s has max |A[s][:, s] - B| <= tol (square matrices)."""
    A, B = np.asarray(A, dtype=float), np.asarray(B, dtype=float)
    if A.shape != B.shape or A.shape[0] != A.shape[1]:
        return False
    for s in permutations(range(A.shape[0])):
        s = list(s)
        if np.max(np.abs(A[np.ix_(s, s)] - B)) <= tol:
            return True
    return False


def swiss_francs_data():
    """4 on the diagonal and 2 elsewhere, 4 x 4."""
    return (2 * np.ones((4, 4), dtype=int) + 2 * np.eye(4, dtype=int)).tolist()


def swiss_francs_conjectured():
    from fractions import Fraction

    block = [[3, 3, 2, 2], [3, 3, 2, 2], [2, 2, 3, 3], [2, 2, 3, 3]]
    return [[Fraction(x, 40) for x in row] for row in block]
