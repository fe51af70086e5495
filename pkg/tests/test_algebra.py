from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from algstat.algebra import (
    BLAS_PRIME,
    DimensionError,
    DivisibilityError,
    FpElem,
    MPoly,
    adjugate,
    det_exact,
    identity,
    leading_principal_minors,
    matmul,
    parse_poly,
    rank_exact,
    rank_mod_p,
    resultant,
    squarefree_part,
    univariate_roots,
)
from algstat.algebra.univariate import ConvergenceError, poly_mul

small_ints = st.integers(min_value=-6, max_value=6)


def square(n):
    return st.lists(st.lists(small_ints, min_size=n, max_size=n), min_size=n, max_size=n)


@settings(max_examples=60, deadline=None)
@given(square(4))
def test_det_matches_float(M):
    assert abs(det_exact(M) - np.linalg.det(np.array(M, dtype=float))) < 1e-6


@settings(max_examples=40, deadline=None)
@given(square(3))
def test_adjugate_identity(M):
    d = det_exact(M)
    assert matmul(M, adjugate(M)) == [[d if a == b else 0 for b in range(3)] for a in range(3)]


def test_det_rejects_nonsquare():
    with pytest.raises(DimensionError):
        det_exact([[1, 2, 3], [4, 5, 6]])


def test_symbolic_det_of_generic_2x2():
    v = ("a", "b", "c", "d")
    a, b, c, d = MPoly.gens(v)
    assert det_exact([[a, b], [c, d]]) == a * d - b * c


def test_rank_and_minors():
    M = [[1, 2, 3], [2, 4, 6], [1, 0, 1]]
    assert rank_exact(M) == 2
    assert leading_principal_minors([[2, 1], [1, 2]]) == [2, 3]
    assert rank_exact(identity(5)) == 5


def test_parse_and_print_roundtrip():
    f = parse_poly("3*x^2*y - 1/2*y^3 + 7", ("x", "y"))
    g = parse_poly(str(f), ("x", "y"))
    assert f == g
    assert f.degree() == 3 and not f.is_homogeneous()


@settings(max_examples=40, deadline=None)
@given(st.lists(small_ints, min_size=1, max_size=6), st.lists(small_ints, min_size=1, max_size=6))
def test_exact_division_recovers_factor(cf, cg):
    x, y = MPoly.gens(("x", "y"))
    f = sum((c * x**k * y ** (len(cf) - k) for k, c in enumerate(cf)), MPoly.const(("x", "y"), 1))
    g = sum((c * x ** (len(cg) - k) * y**k for k, c in enumerate(cg)), MPoly.const(("x", "y"), 2))
    assert (f * g).exact_div(g) == f


def test_exact_division_detects_remainder():
    x, y = MPoly.gens(("x", "y"))
    with pytest.raises(DivisibilityError):
        (x * x + y).exact_div(x)


def test_diff_and_evaluate():
    f = parse_poly("x^3*y + 2*y^2", ("x", "y"))
    assert f.diff("x") == parse_poly("3*x^2*y", ("x", "y"))
    assert f.evaluate([Fraction(1, 2), 3]) == Fraction(3, 8) + 18


def test_fp_arithmetic():
    p = 101
    a = FpElem(37, p)
    assert a * a.inverse() == FpElem(1, p)
    assert (a / 5) * 5 == a
    assert a**100 == FpElem(1, p)


def test_rank_mod_p_small_and_blocked_agree():
    rng = np.random.default_rng(3)
    A = rng.integers(0, BLAS_PRIME, size=(300, 40))
    B = rng.integers(0, BLAS_PRIME, size=(40, 310))
    M = (A.astype(object) @ B.astype(object)) % BLAS_PRIME
    assert rank_mod_p(np.array(M, dtype=float), BLAS_PRIME) == 40
    small = [[1, 2], [2, 4]]
    assert rank_mod_p(small, 7) == 1


def test_rank_mod_p_sees_characteristic():
    # rank 2 over Q but 1 over F_3
    assert rank_exact([[1, 1], [1, 4]]) == 2
    assert rank_mod_p([[1, 1], [1, 4]], 3) == 1


def test_resultant_of_circle_and_line():
    v = ("x", "y")
    f = parse_poly("x^2 + y^2 - 1", v)
    g = parse_poly("x - y", v)
    r = resultant(f, g, "x")
    assert r.variables == ("y",)
    # common zeros have 2 y^2 = 1
    assert r == parse_poly("2*y^2 - 1", ("y",))


def test_squarefree_part():
    c = poly_mul(poly_mul([1, 1], [1, 1]), [-2, 1])  # (x+1)^2 (x-2)
    assert squarefree_part(c) == [-2, -1, 1]


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(min_value=-20, max_value=20), min_size=2, max_size=8, unique=True))
def test_roots_reconstruct_distinct_integer_roots(rts):
    coeffs = [1]
    for r in rts:
        coeffs = poly_mul(coeffs, [-r, 1])
    z = univariate_roots(coeffs)
    assert sorted(np.round(z.real, 6)) == sorted(rts)
    assert np.max(np.abs(z.imag)) < 1e-6


def test_roots_report_and_failure():
    rep = univariate_roots([1, 0, 1], report=True)
    assert np.allclose(sorted(rep.roots.imag), [-1, 1])
    assert rep.residuals.max() <= rep.tol
    with pytest.raises(ConvergenceError):
        univariate_roots([1, 0, 1], max_sweeps=1, tol=1e-300)


def test_listed_examples():
    assert det_exact(identity(4)) == 1
    assert det_exact([[2, 1], [1, 2]]) == 3
    assert adjugate([[2, 1], [1, 2]]) == [[2, -1], [-1, 2]]
    assert adjugate(identity(3)) == identity(3)
    v = ("x", "y")
    assert parse_poly("x^2 - y^2", v).exact_div(parse_poly("x - y", v)) == parse_poly("x + y", v)
    with pytest.raises(DivisibilityError):
        parse_poly("x + 1", v).exact_div(parse_poly("y", v))
    assert resultant(parse_poly("x^2 - y", v), parse_poly("x - 1", v), "x") == parse_poly("1 - y", ("y",))
    # x - a against x - b with a symbolic and b = 3
    r = resultant(parse_poly("x - y", v), parse_poly("x - 3", v), "x")
    assert r == parse_poly("y - 3", ("y",))


def test_resultant_matches_sylvester_determinant():
    from algstat.algebra.univariate import sylvester_matrix

    rng = np.random.default_rng(1)
    v = ("x", "y")
    x, y = MPoly.gens(v)
    f = sum((int(c) * x**i * y**j for (i, j), c in zip([(2, 0), (1, 1), (0, 2), (1, 0), (0, 1), (0, 0)],
                                                    rng.integers(1, 9, 6))), MPoly(v))
    g = sum((int(c) * x**i * y**j for (i, j), c in zip([(3, 0), (2, 1), (1, 2), (0, 3), (1, 0), (0, 0)],
                                                    rng.integers(1, 9, 6))), MPoly(v))
    r = resultant(f, g, "x")
    assert r.degree() <= f.degree() * g.degree()
    for y0 in range(-3, 4):
        fc = f.substitute({1: MPoly.const(("x",), y0), 0: MPoly.var(("x",), 0)}, ("x",)).univariate_coeffs(0)
        gc = g.substitute({1: MPoly.const(("x",), y0), 0: MPoly.var(("x",), 0)}, ("x",)).univariate_coeffs(0)
        assert r.evaluate([y0]) == det_exact(sylvester_matrix(fc, gc))


def test_squarefree_examples():
    c = poly_mul(poly_mul([-1, 1], [-1, 1]), [2, 1])
    assert squarefree_part(c) == [-2, 1, 1]
    assert squarefree_part([-2, 1, 1]) == [-2, 1, 1]
    rng = np.random.default_rng(0)
    base = [1]
    for r in rng.choice(np.arange(-9, 10), 4, replace=False):
        base = poly_mul(base, [-int(r), 1])
    injected = poly_mul(base, poly_mul([-11, 1], [-11, 1]))
    assert squarefree_part(injected) == squarefree_part(poly_mul(base, [-11, 1]))


def test_roots_of_cubic_and_degree_twelve_product():
    z = univariate_roots([-6, 11, -6, 1])
    assert np.allclose(np.sort(z.real), [1, 2, 3], atol=1e-12)
    rng = np.random.default_rng(12)
    rts = [Fraction(int(a), int(b)) for a, b in zip(rng.integers(-40, 41, 12), rng.integers(1, 9, 12))]
    while len(set(rts)) < 12:
        rts.append(Fraction(len(rts) + 50))
        rts = list(dict.fromkeys(rts))[:12]
    c = [Fraction(1)]
    for r in rts:
        c = poly_mul(c, [-r, 1])
    z = univariate_roots(c)
    for r in rts:
        assert np.min(np.abs(z - float(r))) <= 1e-9


def test_rank_mod_p_examples():
    rng = np.random.default_rng(2)
    p = BLAS_PRIME
    assert rank_mod_p(np.eye(30), p) == 30
    a, b = rng.integers(1, p, 50), rng.integers(1, p, 60)
    assert rank_mod_p(np.outer(a.astype(object), b.astype(object)) % p, p) == 1
    M = rng.integers(0, p, size=(200, 200))
    assert rank_mod_p(M.astype(float), p) == 200
    S = rng.integers(-5, 6, size=(20, 20))
    S[:, 5] = S[:, 0] + S[:, 1]
    assert rank_mod_p(S % p, p) == rank_exact(S.tolist()) == 19
