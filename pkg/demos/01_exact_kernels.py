# Exact kernels: rationals, polynomials, determinants, resultants, roots.
from fractions import Fraction

import numpy as np

from algstat.algebra import BLAS_PRIME, adjugate, det_exact, parse_poly, rank_mod_p, resultant, univariate_roots

M = [[Fraction(2), 1, 0], [1, Fraction(1, 3), 4], [0, 4, 5]]
print("det M      =", det_exact(M))
print("adj M      =", adjugate(M))

v = ("x", "y")
f = parse_poly("x^2 + y^2 - 5", v)
g = parse_poly("x*y - 2", v)
r = resultant(f, g, "x")
print("res_x(f,g) =", r)

# the four intersection points have y in {+-1, +-2}
print("roots      =", np.sort_complex(univariate_roots(r)))

rng = np.random.default_rng(0)
A = rng.integers(0, BLAS_PRIME, size=(400, 60)).astype(float)
print("rank mod p of a 400 x 60 random matrix:", rank_mod_p(A, BLAS_PRIME))
