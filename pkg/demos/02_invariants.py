# Invariants of 4x4x4 tables of rank <= 4, and the frozen sign tables in
# algstat/_constants.py (this script prints the values stored there).
from itertools import permutations

import numpy as np

from algstat.invariants import oriented, quintic_expand, strassen_expand, strassen_value, table_variables, vanishing_report
from algstat.tensors import random_low_rank

q = quintic_expand()
print("quintic (0,0):", len(q), "terms in", len(q.support()), "unknowns, degree", q.degree())
s = strassen_expand()
print("strassen     :", len(s), "terms, degree", s.degree())

names = table_variables()
mono = [0] * 64
for n in ("p_AAC", "p_CCA", "p_CGG", "p_CTT", "p_GAA"):
    mono[names.index(n)] += 1
print("coefficient of p_AAC p_CCA p_CGG p_CTT p_GAA:", q.terms[tuple(mono)], "(printed with +1)")

rng = np.random.default_rng(1)
arr = np.array(rng.integers(-5, 6, size=(3, 3, 3)).tolist(), dtype=object)
slices = [arr[k].tolist() for k in range(3)]
base = strassen_value(*slices)
print("permutation signs:", {p: strassen_value(*[slices[k] for k in p]) // base for p in permutations(range(3))})
signs = {}
for axis in (1, 2, 3):
    O = oriented(arr, axis)
    signs[axis] = strassen_value(*[O[k].tolist() for k in range(3)]) // base
print("orientation signs:", signs)

for rank in (4, 5):
    T, _ = random_low_rank(rank=rank, seed=3)
    print(f"rank {rank} table:", vanishing_report(T)["summary"])
