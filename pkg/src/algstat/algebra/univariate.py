"""Univariate tools: exact gcd/squarefree parts, resultants, and root finding.

Exact univariate polynomials are coefficient lists over Q, lowest degree first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from algstat.algebra.linalg import det_exact
from algstat.algebra.polynomial import MPoly


class ConvergenceError(RuntimeError):
    def __init__(self, msg, residuals=None):
        super().__init__(msg)
        self.residuals = residuals


# -- exact coefficient-list arithmetic ---------------------------------

def trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return trim(out)


def poly_divmod(a, b):
    a = [Fraction(x) for x in trim(a)]
    b = [Fraction(x) for x in trim(b)]
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        c = a[-1] / b[-1]
        q[shift] = c
        for i, y in enumerate(b):
            a[i + shift] -= c * y
        a = trim(a)
    return trim(q), a


def poly_gcd(a, b):
    """Monic gcd over Q."""
    a, b = trim(a), trim(b)
    while b:
        _, r = poly_divmod(a, b)
        a, b = b, r
    if not a:
        return []
    lead = Fraction(a[-1])
    return [Fraction(x) / lead for x in a]


def poly_deriv(a):
    return trim([k * a[k] for k in range(1, len(a))])


def poly_eval(a, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def _content_normalize(a):
    """Scale to integer coefficients with gcd 1 and positive leading coefficient."""
    a = [Fraction(x) for x in trim(a)]
    if not a:
        return a
    from math import gcd, lcm

    den = 1
    for x in a:
        den = lcm(den, x.denominator)
    ints = [int(x * den) for x in a]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if ints[-1] < 0:
        g = -g
    return [Fraction(x // g) for x in ints]


def squarefree_part(p):
    """``p / gcd(p, p')`` normalised to primitive integer coefficients.

    Accepts a univariate :class:`MPoly` (returned as MPoly) or a
    coefficient list (returned as a list).
    """
    as_mpoly = isinstance(p, MPoly)
    coeffs = p.univariate_coeffs(0) if as_mpoly else trim(p)
    if not coeffs:
        raise ValueError("squarefree part of the zero polynomial")
    if len(coeffs) == 1:
        out = [Fraction(1)]
    else:
        g = poly_gcd(coeffs, poly_deriv(coeffs))
        q, r = poly_divmod(coeffs, g)
        assert not r
        out = _content_normalize(q)
    out = [int(x) if x.denominator == 1 else x for x in out]
    if as_mpoly:
        return MPoly.from_univariate(out, p.variables[0])
    return out


def interpolate(xs, ys):
    """Exact Newton interpolation; returns coefficients lowest degree first."""
    n = len(xs)
    coef = [Fraction(y) for y in ys]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = [Fraction(0)]
    for i in range(n - 1, -1, -1):
        # poly = poly * (x - xs[i]) + coef[i]
        shifted = [Fraction(0)] + poly
        for k in range(len(poly)):
            shifted[k] -= xs[i] * poly[k]
        shifted[0] += coef[i]
        poly = shifted
    return trim(poly)


def sylvester_matrix(f, g):
    """Sylvester matrix of coefficient lists (lowest first) with formal degrees len-1."""
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    rows = []
    fr = list(reversed(f))
    gr = list(reversed(g))
    for i in range(n):
        rows.append([0] * i + fr + [0] * (size - i - m - 1))
    for i in range(m):
        rows.append([0] * i + gr + [0] * (size - i - n - 1))
    return rows


def univariate_resultant(f, g):
    if len(f) < 2 and len(g) < 2:
        return 1
    if len(f) < 2:
        return f[0] ** (len(g) - 1) if f else 0
    if len(g) < 2:
        return g[0] ** (len(f) - 1) if g else 0
    return det_exact(sylvester_matrix(f, g))


def _coeffs_in(poly: MPoly, var_idx, other_idx, value, degree):
    """Coefficients of poly in the eliminated variable after fixing the other one."""
    out = [0] * (degree + 1)
    for e, c in poly.terms.items():
        out[e[var_idx]] += c * Fraction(value) ** e[other_idx]
    return out


def resultant(f: MPoly, g: MPoly, eliminate) -> MPoly:
    """Resultant of two bivariate polynomials with respect to ``eliminate``.

    Computed by evaluating the surviving variable at ``deg f * deg g + 1``
    integer points, taking Sylvester determinants with the formal degrees in
    the eliminated variable, and interpolating exactly.
    """
    if f.is_zero() or g.is_zero():
        raise ValueError("resultant of a zero polynomial")
    if len(f.variables) != 2 or f.variables != g.variables:
        raise ValueError("resultant expects two polynomials in the same two variables")
    vi = f.variables.index(eliminate) if isinstance(eliminate, str) else eliminate
    oi = 1 - vi
    df, dg = f.degree_in(vi), g.degree_in(vi)
    if df < 1 or dg < 1:
        raise ValueError("both polynomials must involve the eliminated variable")
    npts = f.degree() * g.degree() + 1
    xs = [Fraction(k) for k in range(npts)]
    ys = [univariate_resultant(_coeffs_in(f, vi, oi, x, df), _coeffs_in(g, vi, oi, x, dg)) for x in xs]
    coeffs = interpolate(xs, ys)
    coeffs = [int(c) if c.denominator == 1 else c for c in coeffs]
    return MPoly.from_univariate(coeffs, f.variables[oi])


# -- numerical roots ---------------------------------------------------

@dataclass
class RootReport:
    roots: np.ndarray
    residuals: np.ndarray
    iterations: int
    tol: float
    scaling: str = field(default="max-coefficient, backward error")


def _backward_error(c, z):
    """|p(z)| / sum |c_k| |z|^k with c highest degree first."""
    num = np.abs(np.polyval(c, z))
    den = np.polyval(np.abs(c), np.abs(z))
    return num / np.where(den == 0, 1.0, den)


def univariate_roots(coeffs, tol=1e-10, max_sweeps=1000, seed=0, report=False):
    """All complex roots (with multiplicity) by Aberth-Ehrlich iteration.

    ``coeffs`` are lowest degree first (numbers or a univariate MPoly).
    Residuals are backward errors of the max-coefficient-scaled polynomial;
    every root must satisfy ``residual <= tol``.
    """
    if isinstance(coeffs, MPoly):
        coeffs = coeffs.univariate_coeffs(0)
    c = np.array([complex(x) for x in coeffs], dtype=complex)
    while c.size and c[-1] == 0:
        c = c[:-1]
    if c.size == 0:
        raise ValueError("roots of the zero polynomial")
    deg = c.size - 1
    if deg < 1:
        raise ValueError("polynomial has degree < 1")
    c = c / np.max(np.abs(c))
    hi = c[::-1]  # highest first
    dhi = np.polyder(hi)
    # Fujiwara-type bound for the start circle
    ratios = np.abs(hi[1:] / hi[0]) ** (1.0 / np.arange(1, deg + 1))
    radius = 2.0 * np.max(ratios) if deg else 1.0
    radius = max(radius, 1e-3)
    rng = np.random.default_rng(seed)
    ang = 2 * np.pi * (np.arange(deg) + 0.25) / deg + rng.uniform(0, 0.1)
    z = 0.5 * radius * np.exp(1j * ang) * (1 + 0.01 * rng.standard_normal(deg))
    sweeps = 0
    for sweeps in range(1, max_sweeps + 1):
        pz = np.polyval(hi, z)
        dz = np.polyval(dhi, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = pz / dz
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, np.inf)
            s = np.sum(1.0 / diff, axis=1)
            w = ratio / (1 - ratio * s)
        w = np.where(np.isfinite(w), w, 0)
        z = z - w
        if np.all(np.abs(w) <= 1e-15 * np.maximum(1, np.abs(z))):
            break
    # Newton polish on the original coefficients
    for _ in range(3):
        pz = np.polyval(hi, z)
        dz = np.polyval(dhi, z)
        step = np.where(np.abs(dz) > 0, pz / np.where(dz == 0, 1, dz), 0)
        cand = z - step
        better = _backward_error(hi, cand) <= _backward_error(hi, z)
        z = np.where(better, cand, z)
    res = _backward_error(hi, z)
    if np.any(res > tol):
        raise ConvergenceError(
            f"Aberth iteration did not reach tol={tol} after {sweeps} sweeps "
            f"(max residual {res.max():.3e})",
            residuals=res,
        )
    if report:
        return RootReport(z, res, sweeps, tol)
    return z
