"""Exact and numerical kernels: rationals, F_p, sparse polynomials, matrices, roots."""

from fractions import Fraction as Rat

from algstat.algebra.finite_field import BLAS_PRIME, DEFAULT_PRIME, FpElem, random_invertible, rank_mod_p
from algstat.algebra.linalg import (
    DimensionError,
    adjugate,
    det_exact,
    identity,
    leading_principal_minors,
    matmul,
    matsub,
    rank_exact,
)
from algstat.algebra.polynomial import DivisibilityError, MPoly, parse_poly
from algstat.algebra.univariate import (
    ConvergenceError,
    resultant,
    squarefree_part,
    univariate_roots,
)


def mpoly_exact_div(f, g):
    return f.exact_div(g)


__all__ = [
    "Rat", "FpElem", "DEFAULT_PRIME", "BLAS_PRIME", "MPoly", "parse_poly", "DivisibilityError",
    "DimensionError", "ConvergenceError", "det_exact", "adjugate", "matmul", "matsub", "identity",
    "rank_exact", "leading_principal_minors", "rank_mod_p", "random_invertible", "resultant",
    "squarefree_part", "univariate_roots", "mpoly_exact_div",
]
