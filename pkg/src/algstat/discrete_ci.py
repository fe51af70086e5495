"""Conditional independence for discrete tables: exact tests, signatures, witness search."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import prod

import numpy as np

from algstat.gaussian_ci.statements import CIStatement, all_statements, statement_index
from algstat.io import format_rat, parse_rat

MAX_CELLS = 64
# exact projections stop once entries need more bits than this
MAX_ENTRY_BITS = 2048


@dataclass(frozen=True)
class TableN:
    """Dense table of exact rationals over variables 1..n, row-major."""

    dims: tuple
    entries: tuple

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims or min(dims) < 1:
            raise ValueError("dims must be positive")
        vals = tuple(Fraction(x) for x in self.entries)
        if len(vals) != prod(dims):
            raise ValueError("entries length does not match dims")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "entries", vals)

    @property
    def n(self):
        return len(self.dims)

    @classmethod
    def from_array(cls, arr):
        arr = np.asarray(arr, dtype=object)
        return cls(arr.shape, tuple(arr.reshape(-1).tolist()))

    def array(self):
        return np.array(self.entries, dtype=object).reshape(self.dims)

    def is_positive(self):
        return all(x > 0 for x in self.entries)

    def to_json(self):
        return {"dims": list(self.dims), "entries": [format_rat(x) for x in self.entries]}

    @classmethod
    def from_json(cls, data):
        return cls(tuple(data["dims"]), tuple(parse_rat(x) for x in data["entries"]))


def marginalize(T: TableN, keep) -> TableN:
    """Sum out every variable not in ``keep`` (1-based); kept axes stay in increasing order."""
    keep = sorted(set(keep))
    if not keep:
        raise ValueError("keep must be nonempty")
    if keep[0] < 1 or keep[-1] > T.n:
        raise ValueError(f"variables {keep} out of range for n = {T.n}")
    drop = tuple(a for a in range(T.n) if a + 1 not in keep)
    arr = T.array()
    if drop:
        arr = arr.sum(axis=drop)
    return TableN.from_array(np.asarray(arr, dtype=object).reshape([T.dims[k - 1] for k in keep]))


def _rank_at_most_one(M):
    rows, cols = len(M), len(M[0])
    for a, b in combinations(range(rows), 2):
        for c, d in combinations(range(cols), 2):
            if M[a][c] * M[b][d] != M[a][d] * M[b][c]:
                return False
    return True


def ci_holds(T: TableN, s) -> bool:
    """All 2x2 minors of every K-slice of the {i, j} u K marginal vanish."""
    if not isinstance(s, CIStatement):
        s = CIStatement.parse(s) if isinstance(s, str) else CIStatement(*s)
    if not s.valid_for(T.n):
        raise ValueError(f"statement {s} is not valid for n = {T.n}")
    keep = sorted({s.i, s.j, *s.K})
    arr = marginalize(T, keep).array()
    # reorder axes to (i, j, K...)
    order = [keep.index(s.i), keep.index(s.j)] + [keep.index(k) for k in s.K]
    arr = np.transpose(arr, order)
    di, dj = arr.shape[:2]
    flat = arr.reshape(di, dj, -1)
    return all(_rank_at_most_one(flat[:, :, t].tolist()) for t in range(flat.shape[2]))


@dataclass(frozen=True)
class CISignature:
    n: int
    dims: tuple
    holds: int

    def statements(self):
        return [s for b, s in enumerate(all_statements(self.n)) if self.holds >> b & 1]

    @classmethod
    def from_statements(cls, dims, statements):
        dims = tuple(dims)
        idx = statement_index(len(dims))
        bits = 0
        for s in statements:
            s = CIStatement.parse(s) if isinstance(s, str) else s
            bits |= 1 << idx[s]
        return cls(len(dims), dims, bits)

    @classmethod
    def full(cls, dims):
        return cls(len(dims), tuple(dims), (1 << len(all_statements(len(dims)))) - 1)

    def to_json(self):
        return {"n": self.n, "dims": list(self.dims), "holds": [str(s) for s in self.statements()]}

    @classmethod
    def from_json(cls, data):
        sig = cls.from_statements(tuple(data["dims"]), data["holds"])
        if sig.n != data["n"]:
            raise ValueError("n does not match dims")
        return sig


def ci_signature(T: TableN) -> CISignature:
    bits = 0
    for b, s in enumerate(all_statements(T.n)):
        if ci_holds(T, s):
            bits |= 1 << b
    return CISignature(T.n, T.dims, bits)


# -- witness search ----------------------------------------------------

def _random_positive(rng, shape, height=9):
    return np.array([Fraction(int(x)) for x in rng.integers(1, height + 1, size=prod(shape))],
                    dtype=object).reshape(shape)


def _normalized(arr):
    total = arr.sum()
    return arr / total


def _factorization(rng, dims, s: CIStatement):
    """p(x_K) p(x_i | x_K) p(x_j | x_K) p(rest | x_i, x_j, x_K) with random rational factors."""
    n = len(dims)
    axes = list(range(n))
    i, j, K = s.i - 1, s.j - 1, [k - 1 for k in s.K]

    def factor(vars_):
        shape = [dims[a] if a in vars_ else 1 for a in axes]
        return _random_positive(rng, shape)

    table = factor(K) * factor([i] + K) * factor([j] + K)
    rest = tuple(a for a in axes if a not in [i, j] + K)
    if rest:
        cond = factor(axes)
        table = table * (cond / cond.sum(axis=rest, keepdims=True))
    return _normalized(table)


def _hierarchical(rng, dims):
    """Product of random positive factors over a random set of proper variable subsets."""
    n = len(dims)
    arr = np.full(dims, Fraction(1), dtype=object)
    for size in range(1, n):
        for vars_ in combinations(range(n), size):
            if size == 1 or rng.random() < 0.5:
                shape = [dims[a] if a in vars_ else 1 for a in range(n)]
                arr = arr * _random_positive(rng, shape)
    return _normalized(arr)


def _too_big(arr):
    return any(x.numerator.bit_length() + x.denominator.bit_length() > MAX_ENTRY_BITS for x in arr.reshape(-1))


def _ci_project(arr, s: CIStatement):
    """One exact IPF-style step: make the {i,j} u K margin conditionally independent.

    p'(x) = p(x) * q(x_ijK) / p(x_ijK) with q = p(x_iK) p(x_jK) / p(x_K).
    """
    n = arr.ndim
    i, j, K = s.i - 1, s.j - 1, [k - 1 for k in s.K]

    def margin(vars_):
        drop = tuple(a for a in range(n) if a not in vars_)
        return arr.sum(axis=drop, keepdims=True) if drop else arr

    m_ijk = margin([i, j] + K)
    q = margin([i] + K) * margin([j] + K) / margin(K)
    return arr * q / m_ijk


def strict_model_search(target: CISignature, budget=200, seed=0, max_cells=MAX_CELLS, rounds=6):
    """Positive rational table with signature exactly ``target``, or None after ``budget`` attempts.

    Returns (table, info).  The ladder is: uniform table, conditional
    factorisations built from a single target statement, random
    hierarchical products, then random tables pushed onto the target by
    exact IPF-style projections.
    """
    dims = tuple(target.dims)
    if prod(dims) > max_cells:
        raise ValueError(f"table with {prod(dims)} cells exceeds the cap of {max_cells}")
    if any(d < 2 for d in dims):
        raise ValueError("every variable needs at least two states")
    members = target.statements()

    def accept(arr):
        if any(x <= 0 for x in arr.reshape(-1)):
            return None
        T = TableN.from_array(arr)
        return T if ci_signature(T).holds == target.holds else None

    uniform = np.full(dims, Fraction(1, prod(dims)), dtype=object)
    found = accept(uniform)
    if found is not None:
        return found, {"step": "uniform", "attempt": 0}
    rng = np.random.default_rng(seed)
    for attempt in range(1, budget + 1):
        if len(members) == 1:
            found = accept(_factorization(rng, dims, members[0]))
            if found is not None:
                return found, {"step": "factorization", "attempt": attempt}
        found = accept(_hierarchical(rng, dims))
        if found is not None:
            return found, {"step": "hierarchical", "attempt": attempt}
        arr = _normalized(_random_positive(rng, dims))
        for _ in range(rounds):
            found = accept(arr)
            if found is not None:
                return found, {"step": "projection", "attempt": attempt}
            if not members:
                break
            for s in members:
                arr = _ci_project(arr, s)
            if _too_big(arr):
                break
    return None, {"step": "not found", "attempt": budget}
