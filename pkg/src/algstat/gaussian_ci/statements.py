"""CI statements [i _||_ j | K] and bitset collections of them."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations


@dataclass(frozen=True, order=True)
class CIStatement:
    """[i _||_ j | K] on the ground set {1..n}; stored with i < j and K sorted."""

    i: int
    j: int
    K: tuple = ()

    def __post_init__(self):
        i, j = sorted((int(self.i), int(self.j)))
        K = tuple(sorted(int(k) for k in self.K))
        if i == j:
            raise ValueError("a CI statement needs two distinct indices")
        if i in K or j in K or len(set(K)) != len(K):
            raise ValueError(f"conditioning set {K} must avoid {i}, {j} and have no repeats")
        object.__setattr__(self, "i", i)
        object.__setattr__(self, "j", j)
        object.__setattr__(self, "K", K)

    def valid_for(self, n):
        return 1 <= self.i and self.j <= n and all(1 <= k <= n for k in self.K)

    def __str__(self):
        return f"{self.i},{self.j}|{','.join(map(str, self.K))}"

    @classmethod
    def parse(cls, text):
        """'i,j|k1,k2' with 1-based indices; 'i,j|' for an empty K."""
        head, _, tail = text.strip().partition("|")
        ij = [int(x) for x in head.split(",")]
        if len(ij) != 2:
            raise ValueError(f"cannot parse CI statement {text!r}")
        K = [int(x) for x in tail.split(",") if x.strip()]
        return cls(ij[0], ij[1], tuple(K))


@lru_cache(maxsize=None)
def all_statements(n):
    """Canonical order: by |K|, then K, then (i, j)."""
    if n < 2:
        raise ValueError("need n >= 2")
    out = []
    ground = range(1, n + 1)
    for size in range(n - 1):
        for K in combinations(ground, size):
            rest = [x for x in ground if x not in K]
            for i, j in combinations(rest, 2):
                out.append(CIStatement(i, j, K))
    return tuple(out)


@lru_cache(maxsize=None)
def statement_index(n):
    return {s: b for b, s in enumerate(all_statements(n))}


@dataclass(frozen=True)
class GaussoidCandidate:
    """A set of CI statements on {1..n}, stored as an integer bitset."""

    n: int
    members: int = 0

    def __post_init__(self):
        if self.members < 0 or self.members >> len(all_statements(self.n)):
            raise ValueError("bitset has bits beyond the statement count")

    @classmethod
    def from_statements(cls, n, statements):
        idx = statement_index(n)
        bits = 0
        for s in statements:
            if isinstance(s, str):
                s = CIStatement.parse(s)
            elif not isinstance(s, CIStatement):
                s = CIStatement(*s)
            if s not in idx:
                raise ValueError(f"statement {s} is not valid for n = {n}")
            bits |= 1 << idx[s]
        return cls(n, bits)

    @classmethod
    def full(cls, n):
        return cls(n, (1 << len(all_statements(n))) - 1)

    def statements(self):
        return [s for b, s in enumerate(all_statements(self.n)) if self.members >> b & 1]

    def __contains__(self, s):
        if not isinstance(s, CIStatement):
            s = CIStatement(*s)
        b = statement_index(self.n).get(s)
        return b is not None and bool(self.members >> b & 1)

    def __len__(self):
        return bin(self.members).count("1")

    def complement(self):
        return GaussoidCandidate(self.n, ((1 << len(all_statements(self.n))) - 1) ^ self.members)

    def to_json(self):
        return {"n": self.n, "statements": [str(s) for s in self.statements()]}

    @classmethod
    def from_json(cls, data):
        return cls.from_statements(data["n"], data["statements"])
