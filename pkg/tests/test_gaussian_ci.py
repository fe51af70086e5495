import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from algstat.gaussian_ci import (
    CIStatement,
    CovMatrix,
    GaussoidCandidate,
    NotPositiveDefinite,
    all_statements,
    apm,
    apm_submatrix,
    certify_witness,
    entropy_vector,
    enumerate_gaussoids,
    enumerate_gaussoids_naive,
    find_representation,
    gaussoid_of,
    is_gaussoid,
    is_gaussoid_masks,
    random_pd,
    submodular_check,
    tight_faces,
)
from algstat.gaussian_ci.entropy import vector_from_function
from algstat.gaussian_ci.fivecycle import CYCLE, symbolic_apm, symbolic_check


def test_statement_order_and_parsing():
    stmts = all_statements(3)
    assert [str(s) for s in stmts] == ["1,2|", "1,3|", "2,3|", "2,3|1", "1,3|2", "1,2|3"]
    assert len(all_statements(4)) == 24 and len(all_statements(5)) == 80
    assert CIStatement.parse("4,2|5,1") == CIStatement(2, 4, (1, 5))
    with pytest.raises(ValueError):
        CIStatement(1, 2, (2,))


def test_candidate_json_and_complement():
    S = GaussoidCandidate.from_statements(4, ["1,2|", "3,4|1,2"])
    assert GaussoidCandidate.from_json(S.to_json()) == S
    assert len(S) == 2 and len(S.complement()) == 22
    assert CIStatement(1, 2) in S and CIStatement(1, 3) not in S


def test_apm_examples():
    I5 = CovMatrix.identity(5)
    s = CIStatement(2, 4, (1, 5))
    rows = apm_submatrix(I5, s)
    assert rows[0] == [0, 0, 0]
    assert apm(I5, s) == 0
    S = CovMatrix.from_matrix([[2, 1, 0], [1, 2, 1], [0, 1, 2]])
    assert apm(S, "1,3|2") == -1


def test_displayed_submatrix_layout():
    M = [[Fraction(10 * a + b) for b in range(1, 6)] for a in range(1, 6)]
    M = [[min(x, y) for x, y in zip(r, c)] for r, c in zip(M, zip(*M))]
    S = CovMatrix.from_matrix(M)
    rows = apm_submatrix(S, CIStatement(2, 4, (1, 5)))
    assert rows == [[S[2, 4], S[2, 1], S[2, 5]], [S[1, 4], S[1, 1], S[1, 5]], [S[5, 4], S[5, 1], S[5, 5]]]


def test_pd_certificate():
    with pytest.raises(NotPositiveDefinite):
        gaussoid_of(CovMatrix.from_matrix([[1, 2], [2, 1]]))
    S = CovMatrix.from_matrix([[2, 1], [1, 2]])
    assert S.pd_certificate() == [2, 3]
    assert CovMatrix.from_json(S.to_json()) == S


def test_gaussoid_of_simple_matrices():
    assert gaussoid_of(CovMatrix.identity(4)) == GaussoidCandidate.full(4)
    D = CovMatrix.from_matrix([[2, 0, 0], [0, 3, 0], [0, 0, 7]])
    assert gaussoid_of(D) == GaussoidCandidate.full(3)
    rng = np.random.default_rng(0)
    for _ in range(100):
        L = np.tril(rng.integers(1, 60, size=(4, 4)) * rng.choice([-1, 1], size=(4, 4))).astype(object)
        S = CovMatrix.from_matrix((L @ L.T).tolist())
        assert gaussoid_of(S).members == 0


def test_block_diagonal_tight_faces():
    S = CovMatrix.from_matrix([[3, 1, 0], [1, 2, 0], [0, 0, 5]])
    expected = GaussoidCandidate.from_statements(3, ["1,3|", "2,3|", "1,3|2", "2,3|1"])
    assert tight_faces(S) == expected == gaussoid_of(S)


def test_axiom_examples():
    assert is_gaussoid(GaussoidCandidate(3, 0))
    bad = GaussoidCandidate.from_statements(3, ["1,2|", "1,3|2"])
    ok, v = is_gaussoid(bad, return_violation=True)
    assert not ok and v.axiom == "a"
    assert is_gaussoid_masks(bad)[0] is False


def test_random_gaussoids_satisfy_axioms():
    rng = np.random.default_rng(1)
    for _ in range(100):
        S = random_pd(4, rng, height=3, zero_prob=0.5)
        G = gaussoid_of(S)
        assert is_gaussoid(G) and is_gaussoid_masks(G)[0]


def test_enumeration_n3():
    fast = enumerate_gaussoids(3)
    slow = enumerate_gaussoids_naive(3)
    assert fast == slow
    members = {g.members for g in fast}
    assert 0 in members and GaussoidCandidate.full(3).members in members
    assert all(is_gaussoid(g) for g in fast)
    with pytest.raises(ValueError):
        enumerate_gaussoids(5)


def test_enumeration_blocking_is_invisible():
    assert enumerate_gaussoids(3, block_bits=2) == enumerate_gaussoids(3)


def test_representation_of_full_set_is_identity():
    res = find_representation(GaussoidCandidate.full(4))
    assert res.found and res.witness == CovMatrix.identity(4)


def test_representation_certified_for_a_small_gaussoid():
    S = GaussoidCandidate.from_statements(3, ["1,2|"])
    res = find_representation(S, budget=10)
    assert res.found
    assert gaussoid_of(res.witness) == S
    assert certify_witness(res.witness.matrix(), 3, [(1, 2, ())])[0]


def test_representation_rejects_non_gaussoid():
    bad = GaussoidCandidate.from_statements(3, ["1,2|", "1,3|2"])
    res = find_representation(bad)
    assert not res.found and "not a gaussoid" in res.reason


def test_five_cycle_without_marginals_is_never_certified():
    S = GaussoidCandidate.from_statements(5, CYCLE)
    assert is_gaussoid(S)
    res = find_representation(S, budget=5, seed=0)
    assert not res.found and res.witness is None


def test_certifier_catches_extra_zero():
    ok, why = certify_witness([[1, 0], [0, 1]], 2, [])
    assert not ok and "vanishes" in why
    ok, _ = certify_witness([[1, 2], [2, 1]], 2, [])
    assert not ok


def test_entropy_examples():
    assert all(v == 0 for v in entropy_vector(CovMatrix.identity(3)).values)
    h = entropy_vector(CovMatrix.from_matrix([[2, 1], [1, 2]]))
    assert h[{1}] == pytest.approx(-math.log(2)) and h[{2}] == pytest.approx(-math.log(2))
    assert h[{1, 2}] == pytest.approx(-math.log(3))
    d = entropy_vector(CovMatrix.from_matrix([[2, 0, 0], [0, 3, 0], [0, 0, 5]]))
    assert d[{1, 3}] == pytest.approx(-math.log(2) - math.log(5))


def test_diagonal_entropy_is_tight_everywhere():
    rep = submodular_check(entropy_vector(CovMatrix.from_matrix([[2, 0, 0], [0, 3, 0], [0, 0, 5]])))
    assert not rep.violated and len(rep.tight) == 6 and not rep.slack


def test_hand_built_violation():
    # H_12 below H_1 + H_2 breaks H_1 + H_2 <= H_12 + H_empty
    h = vector_from_function(2, lambda I: 1.0 if len(I) == 1 else 1.5)
    rep = submodular_check(h)
    assert [str(s) for s, _ in rep.violated] == ["1,2|"]
    assert rep.violated[0][1] == pytest.approx(0.5)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=3, max_value=5), st.integers(min_value=0, max_value=10**6))
def test_faces_equal_gaussoid_and_no_violations(n, seed):
    rng = np.random.default_rng(seed)
    S = random_pd(n, rng, height=2, zero_prob=0.6)
    assert tight_faces(S) == gaussoid_of(S)
    assert not submodular_check(entropy_vector(S)).violated


def test_five_cycle_symbolic_minor():
    rows = symbolic_check()
    assert all(r["match"] for r in rows)
    assert str(symbolic_apm(CYCLE[0])) == rows[0]["printed"]
