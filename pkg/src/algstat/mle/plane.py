"""Critical points of the likelihood restricted to a plane curve."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from algstat.algebra.linalg import det_exact
from algstat.algebra.polynomial import DivisibilityError, MPoly, monomials
from algstat.algebra.univariate import (
    poly_divmod,
    poly_gcd,
    poly_mul,
    resultant,
    squarefree_part,
    trim,
)

PLANE_VARS = ("p0", "p1", "p2")
ADMISSIBLE_TOL = 1e-8
DEDUP_RADIUS = 1e-8
MAX_PROJECTIONS = 12
WORK_DPS = 50


class DegenerateInputError(ValueError):
    pass


@dataclass
class CriticalSet:
    """Distinct complex critical points, normalised so the largest-modulus coordinate is 1."""

    points: list
    residuals: list
    count: int
    flagged: list = field(default_factory=list)
    count_interval: tuple | None = None
    possibly_incomplete: bool = False
    info: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "count": self.count,
            "count_interval": list(self.count_interval) if self.count_interval else None,
            "points": [[[float(z.real), float(z.imag)] for z in pt] for pt in self.points],
            "residuals": [float(r) for r in self.residuals],
            "flagged": [[[float(z.real), float(z.imag)] for z in pt] for pt in self.flagged],
            "possibly_incomplete": self.possibly_incomplete,
            "info": self.info,
        }


def plane_critical_system(F: MPoly, u):
    """The pair (F, G) whose common zeros are the critical points on {F = 0}.

    G is the determinant with rows (u_i, p_i, p_i * dF/dp_i).
    """
    if F.variables != PLANE_VARS:
        F = MPoly(PLANE_VARS, F.terms) if len(F.variables) == 3 else None
        if F is None:
            raise ValueError("plane curves live in the variables p0, p1, p2")
    if F.is_zero() or not F.is_homogeneous():
        raise ValueError("F must be a nonzero homogeneous polynomial")
    if len(u) != 3:
        raise ValueError("u must have three entries")
    p = MPoly.gens(PLANE_VARS)
    rows = [[MPoly.const(PLANE_VARS, Fraction(u[i])), p[i], p[i] * F.diff(i)] for i in range(3)]
    return F, det_exact(rows)


def _strip_excluded_components(F):
    """Divide out linear factors p0, p1, p2, p0+p1+p2 (components inside the excluded locus)."""
    p = MPoly.gens(PLANE_VARS)
    removed = []
    for name, lin in (("p0", p[0]), ("p1", p[1]), ("p2", p[2]), ("p0+p1+p2", p[0] + p[1] + p[2])):
        while F.degree() >= 1:
            try:
                F = F.exact_div(lin)
            except DivisibilityError:
                break
            removed.append(name)
    return F, removed


def _excluded_forms():
    p = MPoly.gens(PLANE_VARS)
    return [p[0], p[1], p[2], p[0] + p[1] + p[2]]


def _chart(poly, M):
    """poly(M @ (x, y, 1)) as a polynomial in (x, y)."""
    x, y = MPoly.gens(("x", "y"))
    images = {i: M[i][0] * x + M[i][1] * y + M[i][2] for i in range(3)}
    return poly.substitute(images, ("x", "y"))


def _line_in_chart(form, M):
    # coefficients (a, b, c) of a*x + b*y + c for a linear form composed with M
    coef = [form.terms.get(tuple(1 if j == i else 0 for j in range(3)), 0) for i in range(3)]
    return [sum(coef[i] * M[i][k] for i in range(3)) for k in range(3)]


def _random_change(rng, height=5):
    while True:
        M = [[Fraction(int(v)) for v in rng.integers(-height, height + 1, size=3)] for _ in range(3)]
        if det_exact(M) == 0:
            continue
        lines = [_line_in_chart(f, M) for f in _excluded_forms()]
        if all(a != 0 for a, _, _ in lines):
            return M


def _restrict_to_line(poly_xy, a, b, c):
    """Univariate coefficients in y of poly(x(y), y) with x = -(b y + c) / a."""
    y = MPoly.var(("y",), 0)
    xs = MPoly.const(("y",), -Fraction(c) / a) + y * (-Fraction(b) / a)
    restricted = poly_xy.substitute({0: xs, 1: y}, ("y",))
    return restricted.univariate_coeffs(0) if restricted else []


def _mp(c):
    c = Fraction(c)
    return mpmath.mpf(c.numerator) / c.denominator


def _eval_xy(poly, x, y):
    return mpmath.fsum(_mp(c) * x**i * y**j for (i, j), c in poly.terms.items())


def _newton_xy(f, g, x, y, steps=40):
    fx, fy, gx, gy = f.diff(0), f.diff(1), g.diff(0), g.diff(1)
    eps = mpmath.mpf(10) ** (-mpmath.mp.dps + 5)
    for _ in range(steps):
        J = mpmath.matrix([[_eval_xy(fx, x, y), _eval_xy(fy, x, y)],
                           [_eval_xy(gx, x, y), _eval_xy(gy, x, y)]])
        rhs = mpmath.matrix([_eval_xy(f, x, y), _eval_xy(g, x, y)])
        try:
            d = mpmath.lu_solve(J, rhs)
        except ZeroDivisionError:
            break
        x, y = x - d[0], y - d[1]
        if abs(d[0]) + abs(d[1]) <= eps * (1 + abs(x) + abs(y)):
            break
    return x, y


def _back_substitute(F, G, f, g, M, ypoly):
    """Numerical points over the roots of ``ypoly``, with relative residuals."""
    fnorm = float(sum(abs(c) for c in F.terms.values()))
    gnorm = float(sum(abs(c) for c in G.terms.values()))
    ys = mpmath.polyroots([_mp(c) for c in reversed(ypoly)], maxsteps=400, extraprec=4 * mpmath.mp.prec)
    out = []
    for y0 in ys:
        fx = [mpmath.mpf(0)] * (f.degree_in(0) + 1)
        for (i, j), c in f.terms.items():
            fx[i] += _mp(c) * y0**j
        while len(fx) > 1 and fx[-1] == 0:
            fx.pop()
        if len(fx) < 2:
            continue
        xs = mpmath.polyroots(list(reversed(fx)), maxsteps=400, extraprec=4 * mpmath.mp.prec) if len(fx) > 2 else [-fx[0] / fx[1]]
        x0 = min(xs, key=lambda x: abs(_eval_xy(g, x, y0)) / (1 + abs(x)) ** g.degree())
        x1, y1 = _newton_xy(f, g, x0, y0)
        pt = _normalize([complex(sum(_mp(M[i][k]) * v for k, v in enumerate((x1, y1, 1)))) for i in range(3)])
        res = max(abs(F.evaluate(list(pt))) / fnorm, abs(G.evaluate(list(pt))) / gnorm)
        out.append((pt, float(res)))
    return out


def _normalize(pt):
    pt = np.asarray(pt, dtype=complex)
    return pt / pt[np.argmax(np.abs(pt))]


def _exact_count(F, G, M):
    """Admissible count through the projection M, or None if M sends an intersection to infinity."""
    f, g = _chart(F, M), _chart(G, M)
    if f.degree_in(0) < 1 or g.degree_in(0) < 1:
        return None
    R = resultant(f, g, "x")
    if R.is_zero():
        raise DegenerateInputError("F and G share a component; the critical locus is not finite")
    if R.degree() < F.degree() * G.degree():
        return None
    R_sf = squarefree_part(R).univariate_coeffs(0)
    bad = [Fraction(1)]
    for form in _excluded_forms():
        a, b, c = _line_in_chart(form, M)
        fl, gl = _restrict_to_line(f, a, b, c), _restrict_to_line(g, a, b, c)
        if not fl and not gl:
            raise DegenerateInputError("an excluded line lies on the curve")
        h = poly_gcd(fl, gl) if fl and gl else (fl or gl)
        common = poly_gcd(R_sf, h) if len(trim(h)) > 1 else [Fraction(1)]
        if len(common) > 1:
            bad = _poly_lcm(bad, common)
    admissible_poly, rem = poly_divmod(R_sf, bad)
    assert not rem
    return len(admissible_poly) - 1, admissible_poly, f, g, M, R, R_sf


def ml_degree_plane(F: MPoly, u, seed=0) -> CriticalSet:
    """Count and locate the admissible critical points of L on the curve F = 0.

    The count is exact: the resultant of the dehomogenised system is made
    squarefree and the factors coming from the excluded lines p_i = 0 and
    p0 + p1 + p2 = 0 are divided out.  Numerical roots are back-substituted
    as a cross-check; a root whose numerical and exact classifications
    disagree is flagged and the count becomes an interval.
    """
    F0 = F if F.variables == PLANE_VARS else MPoly(PLANE_VARS, F.terms)
    plane_critical_system(F0, u)  # validates input
    F_red, removed = _strip_excluded_components(F0)
    info = {"removed_components": removed, "degree": F0.degree()}
    if F_red.degree() < 1:
        info.update(resultant_degree=0, squarefree_degree=0)
        return CriticalSet([], [], 0, info=info)
    _, G = plane_critical_system(F_red, u)
    rng = np.random.default_rng(seed)
    # A non-generic projection can merge or lose points but never create
    # them, so take the largest count and stop once two changes agree on it.
    best, agree, tries = None, 0, 0
    while agree < 2:
        tries += 1
        if tries > MAX_PROJECTIONS:
            raise DegenerateInputError("could not find a generic projection")
        cand = _exact_count(F_red, G, _random_change(rng))
        if cand is None:
            continue
        if best is None or cand[0] > best[0]:
            best, agree = cand, 1
        elif cand[0] == best[0]:
            agree += 1
    exact_count, admissible_poly, f, g, M, R, R_sf = best
    info.update(
        resultant_degree=R.degree(),
        squarefree_degree=len(R_sf) - 1,
        exact_count=exact_count,
        coordinate_change=[[str(x) for x in row] for row in M],
        projections_tried=tries,
        admissible_tol=ADMISSIBLE_TOL,
    )
    # numerical cross-check on the admissible factor only
    points, residuals, flagged = [], [], []
    if exact_count > 0:
        with mpmath.workdps(WORK_DPS):
            for pt, res in _back_substitute(F_red, G, f, g, M, admissible_poly):
                near = min(np.min(np.abs(pt)), abs(pt.sum())) <= ADMISSIBLE_TOL
                if near:
                    flagged.append(pt)
                elif not any(np.linalg.norm(pt - q) <= DEDUP_RADIUS for q in points):
                    points.append(pt)
                    residuals.append(res)
    count_interval = None
    if flagged or len(points) != exact_count:
        count_interval = (len(points), exact_count)
    return CriticalSet(points, residuals, exact_count, flagged=flagged,
                       count_interval=count_interval, info=info)


def _poly_lcm(a, b):
    q, _ = poly_divmod(a, poly_gcd(a, b))
    return poly_mul(q, b)


_ARRANGEMENT_VERTICES = ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, -1, 0), (1, 0, -1), (0, 1, -1))


def meets_excluded_locus_generically(F: MPoly) -> bool:
    """F avoids the vertices of the four excluded lines and crosses each line transversally."""
    if any(F.evaluate(list(v)) == 0 for v in _ARRANGEMENT_VERTICES):
        return False
    t = MPoly.var(("t",), 0)
    one = MPoly.const(("t",), 1)
    # each excluded line parametrised by t -> point, with the t = infinity end checked above
    params = (
        {0: 0 * t, 1: t, 2: one},
        {0: t, 1: 0 * t, 2: one},
        {0: t, 1: one, 2: 0 * t},
        {0: t, 1: one, 2: -t - one},
    )
    for mapping in params:
        c = F.substitute(mapping, ("t",)).univariate_coeffs(0)
        if len(trim(c)) > 1 and len(squarefree_part(c)) != len(trim(c)):
            return False
    return True


def random_dense_curve(degree, rng, height=9, generic=True):
    """Homogeneous form in p0, p1, p2 with random nonzero integer coefficients.

    With ``generic`` the draw is repeated until the curve meets the excluded
    lines transversally and misses their pairwise intersections.
    """
    while True:
        terms = {}
        for e in monomials(3, degree):
            c = 0
            while c == 0:
                c = int(rng.integers(-height, height + 1))
            terms[e] = c
        F = MPoly(PLANE_VARS, terms)
        if not generic or meets_excluded_locus_generically(F):
            return F


def special_quadric(lam):
    """p1^2 - lam * p0 * p2."""
    p = MPoly.gens(PLANE_VARS)
    return p[1] * p[1] - p[0] * p[2] * Fraction(lam)


def hardy_weinberg_curve():
    """det [[2 p0, p1], [p1, 2 p2]]."""
    p = MPoly.gens(PLANE_VARS)
    return det_exact([[p[0] * 2, p[1]], [p[1], p[2] * 2]])
