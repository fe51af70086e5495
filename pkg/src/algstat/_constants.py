# Frozen experimental constants. Regenerate with demos/02_invariants.py.

# The commonly printed expansion of the upper-left quintic is the negative of
# entry (0, 0) of A adj(B) C - C adj(B) A.
QUINTIC_PRINTED_SIGN = -1

# strassen(perm(A, B, C)) == sign * strassen(A, B, C); measured on random
# integer triples, equal to the sign of the permutation.
STRASSEN_PERMUTATION_SIGNS = {
    (0, 1, 2): 1,
    (0, 2, 1): -1,
    (1, 0, 2): -1,
    (1, 2, 0): 1,
    (2, 0, 1): 1,
    (2, 1, 0): -1,
}

# Same subtable sliced along axis 2 or along axis 3 instead of axis 1.
STRASSEN_ORIENTATION_SIGN = {1: 1, 2: -1, 3: 1}
