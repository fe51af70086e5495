"""The five-cycle of conditional statements on five Gaussian variables.

Three checks: the five quadrics are the corresponding almost-principal
minors (compared as canonically rendered polynomials), numerical minimisers
over PD_5 have the five cycle entries at zero, and on exact PD samples the
five 2x2 principal-minor inequalities multiply to a strict inequality that
rules out the extra quintic relation.
"""

from __future__ import annotations

import time
from fractions import Fraction

import numpy as np
from scipy.optimize import least_squares

from algstat.algebra.linalg import det_exact
from algstat.algebra.polynomial import MPoly, parse_poly
from algstat.gaussian_ci.covariance import random_pd
from algstat.gaussian_ci.statements import CIStatement

N = 5
SIGMA_VARS = tuple(f"s{a}{b}" for a in range(1, N + 1) for b in range(a, N + 1))

CYCLE = (
    CIStatement(1, 2, (3,)),
    CIStatement(2, 3, (4,)),
    CIStatement(3, 4, (5,)),
    CIStatement(4, 5, (1,)),
    CIStatement(1, 5, (2,)),
)

# the five quadrics as usually printed, written with s_ab for sigma_ab
PRINTED_QUADRICS = (
    "s12*s33 - s13*s23",
    "s23*s44 - s24*s34",
    "s34*s55 - s35*s45",
    "s45*s11 - s14*s15",
    "s15*s22 - s25*s12",
)

CYCLE_ENTRIES = ((1, 2), (2, 3), (3, 4), (4, 5), (1, 5))
INEQUALITY_PAIRS = ((1, 3), (2, 4), (3, 5), (1, 4), (2, 5))
RESIDUAL_TOL = 1e-10
ENTRY_TOL = 1e-7


def sigma_symbol(a, b):
    a, b = sorted((a, b))
    return MPoly.var(SIGMA_VARS, SIGMA_VARS.index(f"s{a}{b}"))


def symbolic_apm(s: CIStatement) -> MPoly:
    rows = [s.i, *s.K]
    cols = [s.j, *s.K]
    return det_exact([[sigma_symbol(a, b) for b in cols] for a in rows])


def symbolic_check():
    """Render each computed minor and each printed quadric in grlex order and compare."""
    rows = []
    for s, text in zip(CYCLE, PRINTED_QUADRICS):
        computed = str(symbolic_apm(s))
        printed = str(parse_poly(text, SIGMA_VARS))
        rows.append({"statement": str(s), "computed": computed, "printed": printed, "match": computed == printed})
    return rows


def _quadrics(S):
    return np.array([
        S[0, 1] * S[2, 2] - S[0, 2] * S[1, 2],
        S[1, 2] * S[3, 3] - S[1, 3] * S[2, 3],
        S[2, 3] * S[4, 4] - S[2, 4] * S[3, 4],
        S[3, 4] * S[0, 0] - S[0, 3] * S[0, 4],
        S[0, 4] * S[1, 1] - S[1, 4] * S[0, 1],
    ])


def _correlation(theta):
    L = np.zeros((N, N))
    L[np.tril_indices(N)] = theta
    S = L @ L.T
    d = np.sqrt(np.diag(S))
    return S / np.outer(d, d)


def numeric_check(n_starts, rng):
    """Least-squares solutions of the five quadrics over unit-diagonal PD_5."""
    solutions, excluded = [], 0
    for _ in range(n_starts):
        theta0 = rng.standard_normal(N * (N + 1) // 2)
        fit = least_squares(lambda t: _quadrics(_correlation(t)), theta0, xtol=1e-15, ftol=1e-15, gtol=1e-15,
                            max_nfev=2000)
        S = _correlation(fit.x)
        resid = float(np.max(np.abs(_quadrics(S))))
        if not np.isfinite(resid) or resid >= RESIDUAL_TOL or np.linalg.eigvalsh(S)[0] <= 1e-8:
            excluded += 1
            continue
        entries = max(abs(S[a - 1, b - 1]) for a, b in CYCLE_ENTRIES)
        solutions.append({"residual": resid, "max_cycle_entry": float(entries)})
    worst = max((s["max_cycle_entry"] for s in solutions), default=None)
    return {"solutions": len(solutions), "excluded": excluded, "max_cycle_entry": worst,
            "ok": bool(solutions) and worst <= ENTRY_TOL}


def inequality_audit(n_samples, rng):
    """Exact check of the five 2x2 inequalities and of their product on random PD_5 matrices."""
    failures = 0
    for _ in range(n_samples):
        S = random_pd(N, rng, height=4)
        ok = all(S[a, a] * S[b, b] > S[a, b] ** 2 for a, b in INEQUALITY_PAIRS)
        lhs = Fraction(1)
        rhs = Fraction(1)
        for a in range(1, N + 1):
            lhs *= S[a, a] ** 2
        for a, b in INEQUALITY_PAIRS:
            rhs *= S[a, b] ** 2
        diag = S[1, 1] * S[2, 2] * S[3, 3] * S[4, 4] * S[5, 5]
        mono = S[1, 3] * S[1, 4] * S[2, 4] * S[2, 5] * S[3, 5]
        ok = ok and lhs > rhs and diag != mono
        failures += not ok
    return {"samples": n_samples, "failures": failures, "ok": failures == 0}


def five_cycle_experiment(n_samples=1000, seed=0, n_starts=20):
    t0 = time.perf_counter()
    ss = np.random.SeedSequence(seed)
    g_num, g_aud = (np.random.default_rng(c) for c in ss.spawn(2))
    sym = symbolic_check()
    num = numeric_check(n_starts, g_num)
    aud = inequality_audit(n_samples, g_aud)
    return {
        "symbolic": sym,
        "symbolic_ok": all(r["match"] for r in sym),
        "numeric": num,
        "inequalities": aud,
        "ok": all(r["match"] for r in sym) and num["ok"] and aud["ok"],
        "seconds": time.perf_counter() - t0,
    }
