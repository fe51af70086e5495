"""Gaussoid axioms (a)-(d) with conditioning sets enlarged by L, and enumeration.

Two independent checkers are provided.  ``is_gaussoid`` walks ordered triples
(i, j, k) and then L, testing membership in a Python set.  ``axiom_rules``
compiles every instance into bitmask rules (premise, conclusion, kind) with
the loops nested the other way round; ``enumerate_gaussoids`` evaluates
those rules on numpy arrays of candidate bitsets.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations

import numpy as np

from algstat.gaussian_ci.statements import CIStatement, GaussoidCandidate, all_statements, statement_index

AXIOMS = ("a", "b", "c", "d")
MAX_ENUM_N = 4


@dataclass(frozen=True)
class Violation:
    axiom: str
    i: int
    j: int
    k: int
    L: tuple

    def __str__(self):
        return f"axiom ({self.axiom}) with i={self.i}, j={self.j}, k={self.k}, L={set(self.L) or '{}'}"


def _st(a, b, K):
    return CIStatement(a, b, tuple(K))


def _premises_conclusions(axiom, i, j, k, L):
    """Premises and conclusions of one axiom instance; (d) has an 'or' conclusion."""
    jL, kL = (j, *L), (k, *L)
    if axiom == "a":
        return [_st(i, j, L), _st(i, k, jL)], [_st(i, k, L), _st(i, j, kL)]
    if axiom == "b":
        return [_st(i, j, kL), _st(i, k, jL)], [_st(i, j, L), _st(i, k, L)]
    if axiom == "c":
        return [_st(i, j, L), _st(i, k, L)], [_st(i, j, kL), _st(i, k, jL)]
    return [_st(i, j, L), _st(i, j, kL)], [_st(i, k, L), _st(j, k, L)]


def is_gaussoid(S, return_violation=False):
    """Check axioms (a)-(d) for all distinct i, j, k and L avoiding them."""
    n = S.n
    members = set(S.statements())
    ground = range(1, n + 1)
    for i, j, k in permutations(ground, 3):
        rest = [x for x in ground if x not in (i, j, k)]
        for size in range(len(rest) + 1):
            for L in combinations(rest, size):
                for ax in AXIOMS:
                    prem, concl = _premises_conclusions(ax, i, j, k, L)
                    if not all(p in members for p in prem):
                        continue
                    ok = any(c in members for c in concl) if ax == "d" else all(c in members for c in concl)
                    if not ok:
                        v = Violation(ax, i, j, k, L)
                        return (False, v) if return_violation else False
    return (True, None) if return_violation else True


@lru_cache(maxsize=None)
def axiom_rules(n):
    """Every axiom instance as (premise mask, conclusion mask, is_or, label).

    Statement bits are looked up by index arithmetic on the canonical order,
    never through CIStatement objects.
    """
    idx = statement_index(n)
    bit = {}
    for s, b in idx.items():
        bit[(s.i, s.j, s.K)] = b

    def b(x, y, K):
        x, y = min(x, y), max(x, y)
        return 1 << bit[(x, y, tuple(sorted(K)))]

    rules = []
    ground = list(range(1, n + 1))
    for size in range(n - 2):
        for L in combinations(ground, size):
            free = [x for x in ground if x not in L]
            for i in free:
                for j in free:
                    for k in free:
                        if len({i, j, k}) < 3:
                            continue
                        jL, kL = L + (j,), L + (k,)
                        rules.append((b(i, j, L) | b(i, k, jL), b(i, k, L) | b(i, j, kL), False, ("a", i, j, k, L)))
                        rules.append((b(i, j, kL) | b(i, k, jL), b(i, j, L) | b(i, k, L), False, ("b", i, j, k, L)))
                        rules.append((b(i, j, L) | b(i, k, L), b(i, j, kL) | b(i, k, jL), False, ("c", i, j, k, L)))
                        rules.append((b(i, j, L) | b(i, j, kL), b(i, k, L) | b(j, k, L), True, ("d", i, j, k, L)))
    # drop exact duplicates, keep order
    seen, out = set(), []
    for r in rules:
        if r[:3] not in seen:
            seen.add(r[:3])
            out.append(r)
    return tuple(out)


def is_gaussoid_masks(S):
    """Second checker on the compiled rules; returns (ok, label of first failing rule)."""
    x = S.members
    for prem, concl, is_or, label in axiom_rules(S.n):
        if x & prem != prem:
            continue
        if (x & concl == 0) if is_or else (x & concl != concl):
            return False, label
    return True, None


def _filter_block(xs, rules):
    ok = np.ones(xs.shape, dtype=bool)
    for prem, concl, is_or, _ in rules:
        fires = (xs & prem) == prem
        if is_or:
            holds = (xs & concl) != 0
        else:
            holds = (xs & concl) == concl
        ok &= ~fires | holds
    return xs[ok]


def enumerate_gaussoids(n, block_bits=20):
    """All gaussoids on n <= 4 elements, in increasing bitset order.

    Candidates are processed in contiguous blocks of 2**block_bits bitsets;
    block outputs are concatenated in block order.
    """
    if n not in (3, MAX_ENUM_N):
        raise ValueError("enumerate_gaussoids supports n = 3 and n = 4")
    nbits = len(all_statements(n))
    rules = [(np.uint64(p), np.uint64(c), o, lab) for p, c, o, lab in axiom_rules(n)]
    total = 1 << nbits
    step = min(total, 1 << block_bits)
    found = []
    for lo in range(0, total, step):
        xs = np.arange(lo, min(total, lo + step), dtype=np.uint64)
        found.extend(int(x) for x in _filter_block(xs, rules))
    return [GaussoidCandidate(n, x) for x in found]


def enumerate_gaussoids_naive(n):
    """Brute force through ``is_gaussoid``; only sensible for n = 3."""
    nbits = len(all_statements(n))
    return [GaussoidCandidate(n, x) for x in range(1 << nbits) if is_gaussoid(GaussoidCandidate(n, x))]
