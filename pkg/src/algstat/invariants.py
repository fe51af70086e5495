"""Degree-5 and degree-9 invariants of 4x4x4 tables of tensor rank <= 4.

Quintics are the entries of ``A adj(B) C - C adj(B) A`` for three slices of
a 3x4x4 (or 4x3x4, 4x4x3) subtable; the degree-9 Strassen invariant is the
numerator ``det(A adj(B) C - C adj(B) A) / det(B)`` on 3x3x3 subtables.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from math import lcm

import numpy as np

from algstat.algebra.finite_field import BLAS_PRIME, random_invertible, rank_mod_p
from algstat.algebra.linalg import DimensionError, adjugate, det_exact, matmul, matsub
from algstat.algebra.polynomial import DivisibilityError, MPoly
from algstat.tensors import Table3

LABELS = "ACGT"


def table_variables(d=4, labels=LABELS):
    """Names p_ijk in row-major order, e.g. ``p_AAC`` for (0, 0, 1)."""
    return tuple("p_" + a + b + c for a, b, c in product(labels[:d], repeat=3))


# -- enumeration ------------------------------------------------------

@dataclass(frozen=True)
class QuinticEnumeration:
    orientation: int  # axis fixed to take slices: 1, 2 or 3
    slices: tuple  # (a, b, c) with a < c; b is the middle slice
    entry: tuple  # (row, col) in the 4x4 commutator

    def label(self):
        a, b, c = self.slices
        return f"q{self.orientation}:{a}{b}{c}:{self.entry[0]}{self.entry[1]}"


@dataclass(frozen=True)
class StrassenEnumeration:
    orientation: int
    selections: tuple  # three increasing 3-subsets, one per axis

    def label(self):
        return f"s{self.orientation}:" + "|".join("".join(map(str, s)) for s in self.selections)


def quintic_enumeration(d=4):
    out = []
    for axis in (1, 2, 3):
        for trio in combinations(range(d), 3):
            for mid in trio:
                a, c = [x for x in trio if x != mid]
                for entry in product(range(d), repeat=2):
                    out.append(QuinticEnumeration(axis, (a, mid, c), entry))
    return out


def strassen_enumeration(d=4):
    subsets = list(combinations(range(d), 3))
    return [StrassenEnumeration(axis, sel) for axis in (1, 2, 3) for sel in product(subsets, repeat=3)]


def oriented(arr, axis):
    """Move ``axis`` (1-based) to the front, keeping the other two in order."""
    return np.moveaxis(np.asarray(arr, dtype=object), axis - 1, 0)


# -- exact evaluation --------------------------------------------------

def adj_commutator(A, B, C):
    """``A adj(B) C - C adj(B) A``, exact."""
    n = len(B)
    if not (len(A) == len(C) == n) or any(len(r) != n for M in (A, B, C) for r in M):
        raise DimensionError("A, B and C must be square matrices of the same size")
    adjB = adjugate(B)
    return matsub(matmul(matmul(A, adjB), C), matmul(matmul(C, adjB), A))


@lru_cache(maxsize=None)
def quintic_expand(entry=(0, 0)) -> MPoly:
    """Symbolic entry of the commutator for the canonical slices 0, 1, 2 along axis 1."""
    names = table_variables(4)
    g = MPoly.gens(names)

    def sl(i):
        return [[g[i * 16 + j * 4 + k] for k in range(4)] for j in range(4)]

    X = adj_commutator(sl(0), sl(1), sl(2))
    return X[entry[0]][entry[1]]


@lru_cache(maxsize=None)
def strassen_expand() -> MPoly:
    """Degree-9 Strassen numerator in the 27 entries of a 3x3x3 table (row-major)."""
    names = tuple(f"p{a}{b}{c}" for a, b, c in product(range(3), repeat=3))
    g = MPoly.gens(names)

    def sl(i):
        return [[g[i * 9 + j * 3 + k] for k in range(3)] for j in range(3)]

    A, B, C = sl(0), sl(1), sl(2)
    full = det_exact(adj_commutator(A, B, C))
    try:
        return full.exact_div(det_exact(B))
    except DivisibilityError as exc:  # pragma: no cover - expansion bug
        raise RuntimeError("det(B) does not divide det of the commutator") from exc


# -- multi-modular evaluation of integer polynomials --------------------

def _is_prime(n):
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _primes_below(bound, count):
    out, n = [], bound - 1
    while len(out) < count:
        if _is_prime(n):
            out.append(n)
        n -= 1
    return out


_CRT_PRIMES = _primes_below(2**31, 16)


class CompiledPoly:
    """Vectorised exact evaluation of an integer-coefficient polynomial.

    Terms become rows of variable indices (padded with a constant-one slot),
    evaluated modulo several 31-bit primes and recombined by CRT under a
    rigorous magnitude bound.
    """

    def __init__(self, poly: MPoly):
        self.nvars = len(poly.variables)
        self.degree = max(poly.degree(), 1)
        den = 1
        for c in poly.terms.values():
            den = lcm(den, Fraction(c).denominator)
        self.denominator = den
        idx, coefs = [], []
        for e, c in poly.sorted_terms():
            row = [i for i, k in enumerate(e) for _ in range(k)]
            row += [self.nvars] * (self.degree - len(row))
            idx.append(row)
            coefs.append(int(Fraction(c) * den))
        self.index = np.array(idx, dtype=np.int64).reshape(len(idx), self.degree)
        self.coefs = coefs
        self.coef_l1 = sum(abs(c) for c in coefs)

    def eval_mod(self, points, p, chunk=32):
        """Values mod p (< 2**31) for an int64 array of residues, shape (n, nvars)."""
        pts = np.asarray(points, dtype=np.int64) % p
        pts = np.concatenate([pts, np.ones((pts.shape[0], 1), dtype=np.int64)], axis=1)
        cm = np.array([c % p for c in self.coefs], dtype=np.int64)
        out = np.empty(pts.shape[0], dtype=np.int64)
        for s in range(0, pts.shape[0], chunk):
            X = pts[s:s + chunk][:, self.index]
            acc = X[..., 0]
            for d in range(1, self.degree):
                acc = (acc * X[..., d]) % p
            acc = (acc * cm) % p
            out[s:s + chunk] = acc.sum(axis=1) % p
        return out

    def eval_exact(self, points):
        """Exact values at integer points (list of rows of Python ints)."""
        pts = [[int(x) for x in row] for row in points]
        if not pts:
            return []
        mx = max(1, max(abs(x) for row in pts for x in row))
        bound = self.coef_l1 * mx ** self.degree
        primes, modulus = [], 1
        for q in _CRT_PRIMES:
            primes.append(q)
            modulus *= q
            if modulus > 2 * bound:
                break
        else:
            raise OverflowError("values too large for the CRT prime pool")
        residues = [self.eval_mod(np.array([[x % q for x in row] for row in pts], dtype=np.int64), q)
                    for q in primes]
        out = []
        for i in range(len(pts)):
            x = 0
            for q, res in zip(primes, residues):
                m = modulus // q
                x += int(res[i]) * m * pow(m, -1, q)
            x %= modulus
            if x > modulus // 2:
                x -= modulus
            out.append(Fraction(x, self.denominator) if self.denominator != 1 else x)
        return out


@lru_cache(maxsize=None)
def _compiled_strassen():
    return CompiledPoly(strassen_expand())


def _integerize(values):
    """Scale rationals to integers by their common denominator."""
    vals = [Fraction(v) for v in values]
    den = 1
    for v in vals:
        den = lcm(den, v.denominator)
    return [int(v * den) for v in vals], den


def _flat27(A, B, C):
    for M in (A, B, C):
        if len(M) != 3 or any(len(r) != 3 for r in M):
            raise DimensionError("strassen_value expects 3x3 slices")
    return [x for M in (A, B, C) for row in M for x in row]


def strassen_values(triples):
    """Exact Strassen numerators for many (A, B, C) triples at once."""
    flat = [_flat27(*t) for t in triples]
    ints, dens = [], []
    for row in flat:
        iv, den = _integerize(row)
        ints.append(iv)
        dens.append(den)
    vals = _compiled_strassen().eval_exact(ints)
    # homogeneous of degree 9: undo the denominator scaling
    return [Fraction(v) / Fraction(d) ** 9 if d != 1 else v for v, d in zip(vals, dens)]


def strassen_value(A, B, C):
    """Exact value of the degree-9 Strassen numerator on 3x3 slices."""
    return strassen_values([(A, B, C)])[0]


# -- vanishing report -------------------------------------------------

def vanishing_report(T: Table3):
    """Evaluate all 576 quintic entries and 192 Strassen values on a 4x4x4 table."""
    if T.dims != (4, 4, 4):
        raise DimensionError(f"vanishing_report needs a 4x4x4 table, got {T.dims}")
    arr = T.array()
    quintics = []
    for axis in (1, 2, 3):
        O = oriented(arr, axis)
        for trio in combinations(range(4), 3):
            for mid in trio:
                a, c = [x for x in trio if x != mid]
                X = adj_commutator(O[a].tolist(), O[mid].tolist(), O[c].tolist())
                for r, s in product(range(4), repeat=2):
                    item = QuinticEnumeration(axis, (a, mid, c), (r, s))
                    quintics.append((item, X[r][s]))
    triples, items = [], []
    for item in strassen_enumeration(4):
        sub = arr[np.ix_(*item.selections)]
        O = oriented(sub, item.orientation)
        triples.append((O[0].tolist(), O[1].tolist(), O[2].tolist()))
        items.append(item)
    svals = strassen_values(triples)
    q_nonzero = sum(1 for _, v in quintics if v != 0)
    s_nonzero = sum(1 for v in svals if v != 0)
    return {
        "quintics": [{"id": it.label(), "status": "zero" if v == 0 else "nonzero"} for it, v in quintics],
        "strassen": [{"id": it.label(), "status": "zero" if v == 0 else "nonzero"}
                     for it, v in zip(items, svals)],
        "summary": {
            "quintic_total": len(quintics),
            "quintic_nonzero": q_nonzero,
            "strassen_total": len(svals),
            "strassen_nonzero": s_nonzero,
            "all_zero": q_nonzero == 0 and s_nonzero == 0,
        },
    }


# -- span dimensions over F_p ------------------------------------------

def _det3_mod(M, p):
    a, b, c = M[..., 0, 0], M[..., 0, 1], M[..., 0, 2]
    d, e, f = M[..., 1, 0], M[..., 1, 1], M[..., 1, 2]
    g, h, i = M[..., 2, 0], M[..., 2, 1], M[..., 2, 2]
    t1 = a * ((e * i - f * h) % p) % p
    t2 = b * ((d * i - f * g) % p) % p
    t3 = c * ((d * h - e * g) % p) % p
    return (t1 - t2 + t3) % p


def _adj_mod(M, p):
    """Vectorised adjugate mod p for stacks of 3x3 or 4x4 matrices."""
    n = M.shape[-1]
    out = np.empty_like(M)
    for i in range(n):
        for j in range(n):
            rows = [r for r in range(n) if r != i]
            cols = [c for c in range(n) if c != j]
            sub = M[..., rows, :][..., cols]
            if n == 3:
                cof = (sub[..., 0, 0] * sub[..., 1, 1] - sub[..., 0, 1] * sub[..., 1, 0]) % p
            else:
                cof = _det3_mod(sub, p)
            out[..., j, i] = cof if (i + j) % 2 == 0 else (-cof) % p
    return out


def _matmul_mod(X, Y, p):
    return np.einsum("...ij,...jk->...ik", X, Y) % p


def _commutator_mod(A, B, C, p):
    adjB = _adj_mod(B, p)
    left = _matmul_mod(_matmul_mod(A, adjB, p), C, p)
    right = _matmul_mod(_matmul_mod(C, adjB, p), A, p)
    return (left - right) % p


def strassen_mod_p(A, B, C, p):
    """Strassen numerator mod p on stacks of 3x3 slices (int64 residues)."""
    X = _commutator_mod(A, B, C, p)
    num = _det3_mod(X, p)
    den = _det3_mod(B, p)
    out = np.zeros_like(num)
    ok = den != 0
    if ok.any():
        inv = np.ones_like(den[ok])
        base = den[ok].copy()
        e = p - 2
        while e:
            if e & 1:
                inv = (inv * base) % p
            base = (base * base) % p
            e >>= 1
        out[ok] = (num[ok] * inv) % p
    if (~ok).any():
        flat = np.concatenate([A[~ok].reshape(-1, 9), B[~ok].reshape(-1, 9), C[~ok].reshape(-1, 9)], axis=1)
        out[~ok] = _compiled_strassen().eval_mod(flat, p)
    return out


def _kron_rows(g1, g2, g3, rows1, rows2, rows3, p):
    """Rows (i, j, k) of g1 (x) g2 (x) g3 mod p, for i in rows1 etc."""
    a = g1[rows1]
    b = g2[rows2]
    c = g3[rows3]
    ab = (a[:, None, :, None] * b[None, :, None, :]) % p  # (r1, r2, 4, 4)
    ab = ab.reshape(len(rows1), len(rows2), -1)
    abc = (ab[:, :, None, :, None] * c[None, None, :, None, :]) % p  # (r1, r2, r3, 16, 4)
    return abc.reshape(len(rows1) * len(rows2) * len(rows3), -1)


def _translated(points_f, g, rows, p):
    """Selected entries of (g1 (x) g2 (x) g3) t for every point t (float64 rows)."""
    K = _kron_rows(g[0], g[1], g[2], rows[0], rows[1], rows[2], p).astype(np.float64)
    out = points_f @ K.T
    return np.fmod(out, p).astype(np.int64)


def family_values_mod_p(family, base, g, points, p=BLAS_PRIME):
    """Values of one translated base invariant at many 4x4x4 points over F_p.

    ``g`` is a triple of invertible 4x4 matrices; ``points`` has shape (n, 64).
    For the quintic family ``base`` is a :class:`QuinticEnumeration`; for the
    Strassen family it is a :class:`StrassenEnumeration`.
    """
    pts = np.asarray(points, dtype=np.float64)
    if family == "quintic":
        axis = base.orientation
        a, b, c = base.slices
        full = [list(range(4))] * 3
        vals = {}
        for s in (a, b, c):
            rows = list(full)
            rows[axis - 1] = [s]
            vals[s] = _translated(pts, g, rows, p).reshape(-1, 4, 4)
        A, B, C = vals[a], vals[b], vals[c]
        X = _commutator_mod(A, B, C, p)
        return X[:, base.entry[0], base.entry[1]]
    if family == "strassen":
        sels = base.selections
        sub = _translated(pts, g, [list(s) for s in sels], p).reshape(-1, 3, 3, 3)
        O = np.moveaxis(sub, base.orientation, 1)
        return strassen_mod_p(O[:, 0], O[:, 1], O[:, 2], p)
    raise ValueError(f"unknown family {family!r}")


EXPECTED_SPAN = {"quintic": 1728, "strassen": 8000}


def span_dimension(family, n_polys=None, n_points=None, prime=BLAS_PRIME, seed=0,
                   translate=True, base_items=None):
    """Dimension of the span of GL(F_p^4)^3-translates of the base invariants.

    Builds M[f, t] = f(t) for random translates f and random points t in
    F_p^64 and returns its rank mod ``prime``.  With ``translate=False`` the
    group action is skipped.
    """
    if prime >= 2**23:
        raise ValueError("span_dimension needs a prime below 2**23 for exact float64 kernels")
    expected = EXPECTED_SPAN[family]
    n_polys = n_polys or int(np.ceil(1.1 * expected))
    n_points = n_points or int(np.ceil(1.1 * expected))
    rng = np.random.default_rng(seed)
    if base_items is None:
        base_items = quintic_enumeration(4) if family == "quintic" else [strassen_enumeration(4)[0]]
    points = rng.integers(0, prime, size=(n_points, 64), dtype=np.int64)
    identity = np.eye(4, dtype=np.int64)
    M = np.empty((n_polys, n_points), dtype=np.float64)
    for f in range(n_polys):
        base = base_items[int(rng.integers(len(base_items)))]
        if translate:
            g = [random_invertible(4, prime, rng) for _ in range(3)]
        else:
            g = [identity] * 3
        M[f] = family_values_mod_p(family, base, g, points, prime)
    return rank_mod_p(M, prime)
