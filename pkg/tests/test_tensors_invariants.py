from itertools import permutations

import numpy as np
import pytest

from algstat._constants import QUINTIC_PRINTED_SIGN, STRASSEN_ORIENTATION_SIGN, STRASSEN_PERMUTATION_SIGNS
from algstat.algebra import rank_mod_p
from algstat.algebra.linalg import DimensionError
from algstat.invariants import (
    adj_commutator,
    family_values_mod_p,
    oriented,
    quintic_enumeration,
    quintic_expand,
    strassen_enumeration,
    strassen_expand,
    strassen_mod_p,
    strassen_value,
    table_variables,
    vanishing_report,
)
from algstat.tensors import ParamTriple, Table3, random_low_rank, slice_, stack_slices, subtable, synthesize


def test_synthesize_rank_one():
    T = synthesize(ParamTriple([[1, 2]], [[3, 0, 1]], [[1, -1]]))
    assert T.dims == (2, 3, 2)
    assert T[1, 0, 1] == 2 * 3 * -1
    assert T[0, 1, 0] == 0


def test_slices_and_stacking_roundtrip():
    T, _ = random_low_rank((3, 4, 5), rank=2, seed=1)
    for axis in (1, 2, 3):
        rebuilt = stack_slices([slice_(T, axis, i) for i in range(T.dims[axis - 1])], axis)
        assert rebuilt == T
    sub = subtable(T, [0, 2], [1, 3], [0, 4])
    assert sub.dims == (2, 2, 2) and sub[1, 1, 1] == T[2, 3, 4]
    with pytest.raises(ValueError):
        subtable(T, [2, 0], [0], [0])


def test_table_json_roundtrip():
    T, _ = random_low_rank(rank=3, seed=7)
    assert Table3.from_json(T.to_json()) == Table3(T.dims, tuple(T.entries))


def test_enumeration_sizes():
    assert len(quintic_enumeration()) == 576
    assert len(strassen_enumeration()) == 192
    assert table_variables()[1] == "p_AAC"


def test_quintic_structure():
    q = quintic_expand()
    assert len(q) == 180
    assert len(q.support()) == 30
    assert q.is_homogeneous() and q.degree() == 5


def test_strassen_structure_and_symmetries():
    s = strassen_expand()
    assert len(s) == 9216
    assert s.is_homogeneous() and s.degree() == 9
    rng = np.random.default_rng(0)
    for _ in range(3):
        arr = np.array(rng.integers(-5, 6, size=(3, 3, 3)).tolist(), dtype=object)
        slices = [arr[i].tolist() for i in range(3)]
        base = strassen_value(*slices)
        assert base == s.evaluate([int(x) for x in arr.reshape(-1)])
        for perm in permutations(range(3)):
            v = strassen_value(*[slices[k] for k in perm])
            assert v == STRASSEN_PERMUTATION_SIGNS[perm] * base
        for axis in (2, 3):
            O = oriented(arr, axis)
            assert strassen_value(*[O[k].tolist() for k in range(3)]) == STRASSEN_ORIENTATION_SIGN[axis] * base


def test_strassen_mod_p_matches_exact():
    rng = np.random.default_rng(5)
    p = 8388593
    arr = rng.integers(-9, 10, size=(4, 3, 3, 3))
    exact = [strassen_value(*[a[k].tolist() for k in range(3)]) for a in arr]
    mod = strassen_mod_p(arr[:, 0] % p, arr[:, 1] % p, arr[:, 2] % p, p)
    assert [int(x) for x in mod] == [e % p for e in exact]


def test_adj_commutator_dimension_check():
    with pytest.raises(DimensionError):
        adj_commutator([[1]], [[1, 0], [0, 1]], [[1]])


def test_vanishing_on_rank_four_and_not_on_rank_five():
    T, _ = random_low_rank(rank=4, seed=11)
    rep = vanishing_report(T)
    assert rep["summary"]["all_zero"]
    assert rep["summary"]["quintic_total"] == 576 and rep["summary"]["strassen_total"] == 192
    T5, _ = random_low_rank(rank=5, seed=11)
    assert not vanishing_report(T5)["summary"]["all_zero"]


def test_vanishing_report_rejects_other_shapes():
    T, _ = random_low_rank((3, 4, 4), rank=2)
    with pytest.raises(DimensionError):
        vanishing_report(T)


def test_base_quintics_are_linearly_independent():
    rng = np.random.default_rng(0)
    p = 8388593
    points = rng.integers(0, p, size=(700, 64), dtype=np.int64)
    eye = np.eye(4, dtype=np.int64)
    rows = [family_values_mod_p("quintic", b, [eye] * 3, points, p) for b in quintic_enumeration()]
    r = rank_mod_p(np.array(rows, dtype=float), p)
    assert r == 576


DISPLAYED_TERMS = (
    (("p_AAC", "p_CCA", "p_CGG", "p_CTT", "p_GAA"), 1),
    (("p_AAC", "p_CCA", "p_CGT", "p_CTG", "p_GAA"), -1),
    (("p_AAC", "p_CCG", "p_CGA", "p_CTT", "p_GAA"), -1),
    (("p_AAC", "p_CCT", "p_CGA", "p_CTG", "p_GAA"), 1),
    (("p_ATA", "p_CAG", "p_CCC", "p_CGA", "p_GAT"), -1),
)


def test_displayed_quintic_terms_up_to_frozen_sign():
    names = table_variables()
    q = quintic_expand()
    for mono, printed in DISPLAYED_TERMS:
        e = [0] * 64
        for name in mono:
            e[names.index(name)] += 1
        assert q.terms[tuple(e)] == QUINTIC_PRINTED_SIGN * printed


def test_every_quintic_entry_has_the_same_shape():
    for a in range(4):
        for b in range(4):
            q = quintic_expand((a, b))
            assert (len(q), len(q.support()), q.degree()) == (180, 30, 5)


def test_quintic_expansion_agrees_with_numeric_commutator():
    q = quintic_expand((1, 2))
    for seed in range(20):
        T, _ = random_low_rank(rank=5, height=4, seed=seed)
        arr = T.array()
        X = adj_commutator(arr[0].tolist(), arr[1].tolist(), arr[2].tolist())
        assert q.evaluate(list(T.entries)) == X[1][2]


def test_commutator_trivial_cases():
    A = [[1, 4, 0, 2], [0, 1, 1, 1], [3, 0, 2, 0], [1, 1, 1, 1]]
    B = [[2, 1, 0, 0], [1, 3, 0, 1], [0, 0, 1, 0], [1, 0, 0, 5]]
    zero = [[0] * 4 for _ in range(4)]
    assert adj_commutator(A, B, A) == zero

    def diag(*d):
        return [[d[a] if a == b else 0 for b in range(4)] for a in range(4)]

    assert adj_commutator(diag(1, 2, 3, 4), diag(5, 1, 2, 7), diag(3, 3, 1, 9)) == zero
    A3, B3 = [r[:3] for r in A[:3]], [r[:3] for r in B[:3]]
    assert strassen_value(A3, B3, A3) == 0


def test_zero_table_vanishes():
    T = Table3((4, 4, 4), (0,) * 64)
    assert vanishing_report(T)["summary"]["all_zero"]


def test_slice_examples():
    T = synthesize(ParamTriple([[1, 0], [0, 1]], [[1, 0], [0, 1]], [[1, 0], [0, 1]]))
    assert slice_(T, 1, 0) == [[1, 0], [0, 0]]
    R, _ = random_low_rank(rank=3, seed=2)
    assert slice_(R, 2, 3) == [[R[i, 3, k] for k in range(4)] for i in range(4)]
    assert subtable(R, range(4), range(4), range(4)) == R


def test_rank_one_tables_have_singular_slices():
    from algstat.algebra import det_exact

    T, _ = random_low_rank((2, 2, 2), rank=1, height=1, seed=9)
    for axis in (1, 2, 3):
        for i in range(2):
            assert det_exact(slice_(T, axis, i)) == 0
