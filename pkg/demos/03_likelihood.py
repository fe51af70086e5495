# Maximum likelihood on plane curves, 3x3 matrices of rank 2, and EM.
import numpy as np

from algstat.mle import (
    check_critical,
    det_critical_points,
    em_low_rank,
    hardy_weinberg_curve,
    hardy_weinberg_mle,
    ml_degree_plane,
    random_dense_curve,
    special_quadric,
)
from algstat.mle.em import swiss_francs_conjectured, swiss_francs_data

u = [3, 5, 7]
print("Hardy-Weinberg closed form:", [str(x) for x in hardy_weinberg_mle(*u)])
print("Hardy-Weinberg ML degree  :", ml_degree_plane(hardy_weinberg_curve(), u).count)
for lam in (1, 2, 3, 4):
    print(f"p1^2 - {lam} p0 p2 ML degree:", ml_degree_plane(special_quadric(lam), u).count)

rng = np.random.default_rng(0)
for d in (2, 3):
    F = random_dense_curve(d, rng)
    res = ml_degree_plane(F, [2, 3, 11])
    print(f"random degree-{d} curve: {res.count} critical points, resultant degree {res.info['resultant_degree']}")

data = np.array([[10, 3, 5], [2, 8, 4], [6, 1, 12]])
res = det_critical_points(3, 3, 2, data, n_starts=3000, expected=10)
print("3x3 rank-2 critical points:", res.count, "max residual", max(res.residuals))

U = swiss_francs_data()
em = em_low_rank(U, 2, n_starts=200)
print("EM best table * 40:\n", np.round(40 * em.best_table, 6))
print("conjectured table check:", check_critical(swiss_francs_conjectured(), U, 2))
