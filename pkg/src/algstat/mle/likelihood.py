"""Log-likelihood, closed-form estimators, and a first-order criticality check."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from algstat.algebra.linalg import rank_exact


class DomainError(ValueError):
    pass


def log_likelihood(p, u) -> float:
    """sum u_i log p_i - N log(sum p_i); invariant under p -> c p."""
    p = np.asarray(p, dtype=float).ravel()
    u = np.asarray(u, dtype=float).ravel()
    if p.shape != u.shape:
        raise DomainError("p and u have different sizes")
    if np.any(p <= 0):
        raise DomainError("log_likelihood needs strictly positive p")
    N = u.sum()
    if N < 1:
        raise DomainError("total count must be at least 1")
    return float(u @ np.log(p) - N * np.log(p.sum()))


def log_likelihood_grad(p, u):
    p = np.asarray(p, dtype=float)
    u = np.asarray(u, dtype=float)
    if np.any(p <= 0):
        raise DomainError("log_likelihood needs strictly positive p")
    return u / p - u.sum() / p.sum()


def hardy_weinberg_mle(u0, u1, u2):
    """Closed-form critical point on p1^2 = 4 p0 p2, normalised to sum 1."""
    u0, u1, u2 = (Fraction(x) for x in (u0, u1, u2))
    if min(u0, u1, u2) < 0 or u0 + u1 + u2 == 0:
        raise DomainError("counts must be nonnegative and not all zero")
    a, b = 2 * u0 + u1, u1 + 2 * u2
    pt = (a * a, 2 * a * b, b * b)
    s = sum(pt)
    return tuple(x / s for x in pt)


def independence_mle(u):
    """Row-sum times column-sum over N^2, exactly."""
    u = [[Fraction(x) for x in row] for row in u]
    N = sum(sum(row) for row in u)
    if N == 0:
        raise DomainError("zero total count")
    rows = [sum(row) for row in u]
    cols = [sum(col) for col in zip(*u)]
    return [[r * c / (N * N) for c in cols] for r in rows]


def _tangent_projector(P, r):
    """Orthogonal projector onto the tangent space of rank-r matrices at P (as a function)."""
    U, s, Vt = np.linalg.svd(P)
    U, V = U[:, :r], Vt[:r].T
    PU, PV = U @ U.T, V @ V.T

    def proj(G):
        return PU @ G + G @ PV - PU @ G @ PV

    return proj, s


def check_critical(p, u, r, tol=1e-9):
    """Projected likelihood gradient at ``p`` for the model {rank <= r, sum = 1}.

    The tangent space is that of the rank-r manifold cut by the hyperplane
    sum(p) = 1.  Returns a report with the projected-gradient norm, the
    smallest discarded singular value (the constraint residual) and the
    exact rank when ``p`` has rational entries.
    """
    P = np.asarray(p, dtype=float)
    U = np.asarray(u, dtype=float)
    if P.ndim != 2 or P.shape != U.shape:
        raise DomainError("p and u must be matrices of the same shape")
    if np.any(P <= 0):
        raise DomainError("check_critical needs strictly positive p")
    if not 1 <= r <= min(P.shape):
        raise DomainError("r must lie between 1 and min(m, n)")
    Pn = P / P.sum()
    proj, s = _tangent_projector(Pn, r)
    off = float(s[r]) if r < len(s) else 0.0
    if off > tol * max(1.0, float(s[0])):
        raise DomainError(f"p is not of rank <= {r}: singular value {off:.3e} beyond tolerance")
    G = log_likelihood_grad(Pn, U)
    # tangent space of {rank <= r} intersected with {sum = 0}
    W = proj(np.ones_like(Pn))
    PG = proj(G)
    ww = float(np.sum(W * W))
    if ww > 0:
        PG = PG - (np.sum(PG * W) / ww) * W
    report = {
        "projected_gradient_norm": float(np.linalg.norm(PG)),
        "gradient_norm": float(np.linalg.norm(G)),
        "constraint_residual": off,
        "r": r,
    }
    if all(isinstance(x, (int, Fraction)) for row in p for x in row):
        report["exact_rank"] = rank_exact([[Fraction(x) for x in row] for row in p])
    return report
