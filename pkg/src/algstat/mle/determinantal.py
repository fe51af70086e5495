"""Critical points of the likelihood on the hypersurface det P = 0.

Unknowns are the n*n entries of P together with multipliers lam and mu.
The Lagrange conditions u_ij / p_ij = lam * C_ij + mu, with C the cofactor
matrix, are used in the cleared form p_ij (lam C_ij + mu) = u_ij; points
with a vanishing coordinate are discarded afterwards.
"""

from __future__ import annotations

from itertools import permutations

import numpy as np

from algstat.mle.likelihood import DomainError, independence_mle
from algstat.mle.plane import ADMISSIBLE_TOL, DEDUP_RADIUS, CriticalSet

RESIDUAL_TOL = 1e-10


def _perm_sign(perm):
    sign, seen = 1, list(perm)
    for i in range(len(seen)):
        while seen[i] != i:
            j = seen[i]
            seen[i], seen[j] = seen[j], seen[i]
            sign = -sign
    return sign


class _DetExpansion:
    """det, its gradient (the cofactor matrix) and its Hessian, batched over a leading axis.

    Every term of the permutation expansion and of its first two derivatives
    is a signed product of entries; the index sets are built once and the
    terms are scattered into place with a 0/1 matrix product.
    """

    def __init__(self, n):
        self.n = n
        nn = n * n
        perms = [(p, _perm_sign(p)) for p in permutations(range(n))]
        full = [[i * n + p[i] for i in range(n)] for p, _ in perms]
        self.det_idx = np.array(full)
        self.det_sgn = np.array([s for _, s in perms], dtype=float)
        g_idx, g_sgn, g_dst = [], [], []
        h_idx, h_sgn, h_dst = [], [], []
        for (p, s), cells in zip(perms, full):
            for i in range(n):
                g_idx.append([c for t, c in enumerate(cells) if t != i])
                g_sgn.append(s)
                g_dst.append(cells[i])
                for k in range(n):
                    if k != i:
                        h_idx.append([c for t, c in enumerate(cells) if t not in (i, k)])
                        h_sgn.append(s)
                        h_dst.append(cells[i] * nn + cells[k])
        self.g_idx, self.h_idx = np.array(g_idx), np.array(h_idx).reshape(len(h_sgn), n - 2)
        self.g_scatter = np.zeros((len(g_sgn), nn))
        self.g_scatter[np.arange(len(g_sgn)), g_dst] = g_sgn
        self.h_scatter = np.zeros((len(h_sgn), nn * nn))
        self.h_scatter[np.arange(len(h_sgn)), h_dst] = h_sgn

    def __call__(self, X, hessian=True):
        B, n = X.shape[0], self.n
        Xf = X.reshape(B, n * n)
        det = np.prod(Xf[:, self.det_idx], axis=2) @ self.det_sgn
        grad = (np.prod(Xf[:, self.g_idx], axis=2) @ self.g_scatter).reshape(B, n, n)
        if not hessian:
            return det, grad, None
        hess = (np.prod(Xf[:, self.h_idx], axis=2) @ self.h_scatter).reshape(B, n, n, n, n)
        return det, grad, hess


def _system(Z, U, expand, jacobian=True):
    """Residual vector and Jacobian for a batch of unknown vectors Z = (vec P, lam, mu)."""
    B = Z.shape[0]
    n = U.shape[0]
    nn = n * n
    X = Z[:, :nn].reshape(B, n, n)
    lam, mu = Z[:, nn], Z[:, nn + 1]
    det, C, H = expand(X, hessian=jacobian)
    W = lam[:, None, None] * C + mu[:, None, None]
    F = np.empty((B, nn + 2), dtype=Z.dtype)
    F[:, :nn] = (X * W - U).reshape(B, nn)
    F[:, nn] = det
    F[:, nn + 1] = X.reshape(B, nn).sum(axis=1) - 1
    if not jacobian:
        return F, None
    J = np.zeros((B, nn + 2, nn + 2), dtype=Z.dtype)
    Xf = X.reshape(B, nn)
    J[:, :nn, :nn] = (lam[:, None, None] * Xf[:, :, None]) * H.reshape(B, nn, nn)
    idx = np.arange(nn)
    J[:, idx, idx] += W.reshape(B, nn)
    J[:, :nn, nn] = Xf * C.reshape(B, nn)
    J[:, :nn, nn + 1] = Xf
    J[:, nn, :nn] = C.reshape(B, nn)
    J[:, nn + 1, :nn] = 1
    return F, J


def _residual(Z, U, expand):
    F, _ = _system(Z, U, expand, jacobian=False)
    scale = np.ones(F.shape[1])
    scale[: U.size] = max(1.0, float(U.sum()))
    return np.max(np.abs(F) / scale, axis=1)


def _starts(n, n_starts, seed):
    """Complex Gaussian starts, one RNG substream per start index."""
    nn = n * n
    out = np.empty((n_starts, nn + 2), dtype=complex)
    for s, child in enumerate(np.random.SeedSequence(seed).spawn(n_starts)):
        g = np.random.default_rng(child)
        out[s] = g.standard_normal(nn + 2) + 1j * g.standard_normal(nn + 2)
    out[:, :nn] /= out[:, :nn].sum(axis=1, keepdims=True)
    return out


def _newton(Z, U, expand, max_iters=80):
    """Damped Newton, batched; halving line search on the residual norm."""
    F, J = _system(Z, U, expand)
    norm = np.linalg.norm(F, axis=1)
    active = np.isfinite(norm)
    for _ in range(max_iters):
        if not active.any():
            break
        ia = np.flatnonzero(active)
        try:
            step = np.linalg.solve(J[ia], F[ia][..., None])[..., 0]
        except np.linalg.LinAlgError:
            step = np.stack([_safe_solve(J[i], F[i]) for i in ia])
        t = np.ones(len(ia))
        Zi = Z[ia]
        accepted = np.zeros(len(ia), dtype=bool)
        for _half in range(12):
            trial = Zi - t[:, None] * step
            Ft, _ = _system(trial, U, expand, jacobian=False)
            nt = np.linalg.norm(Ft, axis=1)
            ok = np.isfinite(nt) & (nt < norm[ia]) & ~accepted
            Zi = np.where(ok[:, None], trial, Zi)
            accepted |= ok
            if accepted.all():
                break
            t = np.where(accepted, t, t / 2)
        Z[ia] = Zi
        F, J = _system(Z, U, expand)
        new_norm = np.linalg.norm(F, axis=1)
        stalled = ~accepted | ~np.isfinite(new_norm[ia])
        converged = new_norm <= 1e-13 * max(1.0, float(U.sum()))
        norm = new_norm
        active[ia[stalled]] = False
        active &= ~converged
    return Z


def _safe_solve(J, F):
    try:
        return np.linalg.solve(J, F)
    except np.linalg.LinAlgError:
        return np.full_like(F, np.nan)


def det_critical_points(m, n, r, u, n_starts=5000, seed=0, expected=None, batch=1000):
    """Distinct complex critical points of the likelihood on {rank P <= r}.

    Only the hypersurface case r = n - 1 of square matrices is solved
    numerically; r = 1 goes to the closed-form estimator.
    Multi-start Newton carries no completeness certificate, so if
    ``expected`` is given and fewer points are found the result is marked
    possibly incomplete.
    """
    U = np.asarray(u, dtype=float)
    if U.shape != (m, n):
        raise DomainError(f"u must be {m} x {n}")
    if r < 1 or r >= min(m, n) + 1:
        raise DomainError("r out of range")
    if r == 1:
        p = np.array(independence_mle(np.asarray(u).tolist()), dtype=float).ravel()
        pt = (p / p[np.argmax(np.abs(p))]).astype(complex)
        return CriticalSet([pt], [0.0], 1, info={"method": "closed form", "r": 1})
    if m != n or r != n - 1:
        raise DomainError("only the hypersurface case m = n, r = n - 1 is supported")
    expand = _DetExpansion(n)
    Z0 = _starts(n, n_starts, seed)
    for lo in range(0, n_starts, batch):
        Z0[lo:lo + batch] = _newton(Z0[lo:lo + batch].copy(), U, expand)
    res = _residual(Z0, U, expand)
    good = np.flatnonzero(np.isfinite(res) & (res <= RESIDUAL_TOL))
    nn = n * n
    candidates = []
    for i in good:
        p = Z0[i, :nn]
        pn = p / p[np.argmax(np.abs(p))]
        if np.min(np.abs(pn)) <= ADMISSIBLE_TOL or abs(p.sum()) <= ADMISSIBLE_TOL:
            continue
        candidates.append((float(res[i]), pn))
    candidates.sort(key=lambda c: (c[0], tuple(np.round(np.r_[c[1].real, c[1].imag], 12))))
    points, residuals = [], []
    for rv, pn in candidates:
        if any(np.linalg.norm(pn - q) <= DEDUP_RADIUS for q in points):
            continue
        points.append(pn)
        residuals.append(rv)
    order = sorted(range(len(points)), key=lambda k: tuple(np.round(np.r_[points[k].real, points[k].imag], 10)))
    points = [points[k] for k in order]
    residuals = [residuals[k] for k in order]
    incomplete = expected is not None and len(points) < expected
    info = {"method": "multi-start damped Newton", "n_starts": n_starts, "converged_starts": int(len(good)),
            "residual_tol": RESIDUAL_TOL, "dedup_radius": DEDUP_RADIUS, "r": r}
    return CriticalSet(points, residuals, len(points), possibly_incomplete=incomplete, info=info)
