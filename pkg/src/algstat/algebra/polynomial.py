"""Sparse multivariate polynomials with exact coefficients.

Terms are stored as a dict mapping exponent tuples to nonzero coefficients.
Coefficients may be ``int``, ``Fraction`` or :class:`~algstat.algebra.finite_field.FpElem`;
anything closed under ``+``, ``-`` and ``*`` works, and exact division
additionally needs ``/``.
"""

from __future__ import annotations

import heapq
import re
from fractions import Fraction
from itertools import product
from operator import add, sub
from typing import Iterable, Mapping, Sequence


class DivisibilityError(ArithmeticError):
    """Raised by :meth:`MPoly.exact_div` when the divisor does not divide.

    ``remainder_term`` is the first (graded-lex largest) term that could not
    be cancelled, as an ``(exponent, coefficient)`` pair.
    """

    def __init__(self, msg, remainder_term=None):
        super().__init__(msg)
        self.remainder_term = remainder_term


def _grlex_key(exp):
    return (sum(exp), exp)


def _div_coeff(a, b):
    # keep integer coefficients integral when the quotient is exact
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        return q if r == 0 else Fraction(a, b)
    return a / b


class MPoly:
    """Polynomial in the ordered variables ``variables``.

    Instances are treated as immutable; all arithmetic returns new objects.
    """

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple, object] | None = None):
        self.variables = tuple(variables)
        nv = len(self.variables)
        clean = {}
        if terms:
            for exp, c in terms.items():
                if c != 0:
                    exp = tuple(exp)
                    if len(exp) != nv:
                        raise ValueError(f"exponent {exp} does not match {nv} variables")
                    clean[exp] = c
        self.terms = clean

    # -- constructors -------------------------------------------------
    @classmethod
    def const(cls, variables, c):
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, variables, name_or_index, coeff=1):
        variables = tuple(variables)
        idx = variables.index(name_or_index) if isinstance(name_or_index, str) else name_or_index
        exp = [0] * len(variables)
        exp[idx] = 1
        return cls(variables, {tuple(exp): coeff})

    @classmethod
    def gens(cls, variables):
        return [cls.var(variables, i) for i in range(len(variables))]

    def _wrap(self, other):
        if isinstance(other, MPoly):
            if other.variables != self.variables:
                raise ValueError("polynomials live in different rings")
            return other
        return MPoly.const(self.variables, other)

    # -- inspection ---------------------------------------------------
    def __len__(self):
        return len(self.terms)

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self):
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, var):
        i = self.variables.index(var) if isinstance(var, str) else var
        return max((e[i] for e in self.terms), default=-1)

    def is_homogeneous(self):
        return len({sum(e) for e in self.terms}) <= 1

    def support(self):
        """Indices of the variables that occur in some term."""
        used = set()
        for e in self.terms:
            used.update(i for i, k in enumerate(e) if k)
        return sorted(used)

    def sorted_terms(self, reverse=True):
        """Terms in graded-lexicographic order, largest first by default."""
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=reverse)

    def leading_term(self):
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        exp = max(self.terms, key=_grlex_key)
        return exp, self.terms[exp]

    # -- arithmetic ---------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self.variables == other.variables and self.terms == other.terms
        if other == 0:
            return not self.terms
        return self.terms == MPoly.const(self.variables, other).terms

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    def __neg__(self):
        return MPoly(self.variables, {e: -c for e, c in self.terms.items()})

    def __add__(self, other):
        other = self._wrap(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v == 0:
                out.pop(e, None)
            else:
                out[e] = v
        return MPoly(self.variables, out)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return self._wrap(other) - self

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            if other == 0:
                return MPoly(self.variables)
            return MPoly(self.variables, {e: c * other for e, c in self.terms.items()})
        other = self._wrap(other)
        out: dict = {}
        get = out.get
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                e = tuple(map(add, ea, eb))
                out[e] = get(e, 0) + ca * cb
        return MPoly(self.variables, out)

    def __rmul__(self, other):
        return self * other

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = MPoly.const(self.variables, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def exact_div(self, g: "MPoly") -> "MPoly":
        """Quotient ``q`` with ``q * g == self``; raises :class:`DivisibilityError` otherwise."""
        g = self._wrap(g)
        if g.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        lead_e, lead_c = g.leading_term()
        g_terms = list(g.terms.items())
        rem = dict(self.terms)
        heap = [(-sum(e), tuple(-x for x in e)) for e in rem]
        heapq.heapify(heap)
        quot = {}
        while heap:
            _, neg = heapq.heappop(heap)
            e = tuple(-x for x in neg)
            c = rem.get(e)
            if c is None or c == 0:
                continue
            qe = tuple(map(sub, e, lead_e))
            if min(qe) < 0:
                raise DivisibilityError(
                    f"leading remainder term {self._fmt_mono(e)} not divisible by "
                    f"{self._fmt_mono(lead_e)}",
                    (e, c),
                )
            qc = _div_coeff(c, lead_c)
            quot[qe] = qc
            for ge, gc in g_terms:
                te = tuple(map(add, qe, ge))
                v = rem.get(te, 0) - qc * gc
                if v == 0:
                    rem.pop(te, None)
                else:
                    if te not in rem:
                        heapq.heappush(heap, (-sum(te), tuple(-x for x in te)))
                    rem[te] = v
        return MPoly(self.variables, quot)

    # -- calculus & substitution ---------------------------------------
    def diff(self, var):
        i = self.variables.index(var) if isinstance(var, str) else var
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = c * e[i]
        return MPoly(self.variables, out)

    def __call__(self, *values):
        return self.evaluate(values)

    def evaluate(self, values: Sequence):
        """Evaluate at a point; ``values`` are in the order of ``variables``."""
        if len(values) != len(self.variables):
            raise ValueError("wrong number of values")
        total = 0
        powers: dict = {}
        for e, c in self.terms.items():
            t = c
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    pw = powers.get(key)
                    if pw is None:
                        pw = powers[key] = values[i] ** k
                    t = t * pw
            total = total + t
        return total

    def substitute(self, mapping: Mapping, variables: Sequence[str] | None = None) -> "MPoly":
        """Replace variables by polynomials (or constants) in a target ring.

        ``mapping`` maps variable name or index to an :class:`MPoly` living in
        ``variables`` (defaults to this ring); unmapped variables are kept and
        must then exist in the target ring by name.
        """
        target = tuple(variables) if variables is not None else self.variables
        images = []
        for i, name in enumerate(self.variables):
            img = mapping.get(name, mapping.get(i))
            if img is None:
                img = MPoly.var(target, name)
            elif not isinstance(img, MPoly):
                img = MPoly.const(target, img)
            images.append(img)
        result = MPoly(target)
        cache: dict = {}
        for e, c in self.terms.items():
            t = MPoly.const(target, c)
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in cache:
                        cache[key] = images[i] ** k
                    t = t * cache[key]
            result = result + t
        return result

    def map_coefficients(self, fn) -> "MPoly":
        return MPoly(self.variables, {e: fn(c) for e, c in self.terms.items()})

    # -- univariate helpers -------------------------------------------
    def univariate_coeffs(self, var=0):
        """Coefficients of a polynomial in a single variable, lowest degree first."""
        i = self.variables.index(var) if isinstance(var, str) else var
        for e in self.terms:
            if any(k for j, k in enumerate(e) if j != i):
                raise ValueError("polynomial is not univariate in the requested variable")
        deg = self.degree_in(i)
        out = [0] * (deg + 1)
        for e, c in self.terms.items():
            out[e[i]] = c
        return out

    @classmethod
    def from_univariate(cls, coeffs, variable="x"):
        return cls((variable,), {(k,): c for k, c in enumerate(coeffs) if c != 0})

    # -- formatting ---------------------------------------------------
    def _fmt_mono(self, e):
        parts = []
        for name, k in zip(self.variables, e):
            if k == 1:
                parts.append(name)
            elif k:
                parts.append(f"{name}^{k}")
        return "*".join(parts) if parts else "1"

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for e, c in self.sorted_terms():
            mono = self._fmt_mono(e)
            neg = c < 0 if not hasattr(c, "value") else False
            mag = -c if neg else c
            if mono == "1":
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if not out:
                out.append(("-" if neg else "") + body)
            else:
                out.append((" - " if neg else " + ") + body)
        return "".join(out)

    def __repr__(self):
        return f"MPoly({self.variables!r}, {str(self)!r})"

    # -- serialization ------------------------------------------------
    def to_json(self):
        from algstat.io import format_rat

        return [{"exp": list(e), "coef": format_rat(c)} for e, c in self.sorted_terms()]

    @classmethod
    def from_json(cls, variables, data):
        from algstat.io import parse_rat

        return cls(variables, {tuple(t["exp"]): parse_rat(t["coef"]) for t in data})


_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*^()/]))")


def parse_poly(text: str, variables: Sequence[str]) -> MPoly:
    """Parse ``"p1^2 - 4*p0*p2"``-style strings with rational coefficients.

    Supports ``+ - *``, ``^`` or ``**`` with integer exponents, parentheses,
    and rational literals like ``3/4``.
    """
    variables = tuple(variables)
    pos = 0
    toks = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial near {text[pos:]!r}")
        num, name, op = m.groups()
        if num is not None:
            toks.append(("num", Fraction(num)))
        elif name is not None:
            if name not in variables:
                raise ValueError(f"unknown variable {name!r}; expected one of {variables}")
            toks.append(("var", name))
        else:
            toks.append(("op", "^" if op == "**" else op))
        pos = m.end()
    toks.append(("end", None))
    i = 0

    def peek():
        return toks[i]

    def take():
        nonlocal i
        i += 1
        return toks[i - 1]

    def expr():
        if peek() == ("op", "-"):
            take()
            acc = -term()
        else:
            if peek() == ("op", "+"):
                take()
            acc = term()
        while peek()[0] == "op" and peek()[1] in "+-":
            op = take()[1]
            acc = acc + term() if op == "+" else acc - term()
        return acc

    def term():
        acc = power()
        while peek()[0] == "op" and peek()[1] in "*/" or peek()[0] in ("var", "num") or peek() == ("op", "("):
            if peek() == ("op", "/"):
                take()
                d = power()
                if d.degree() > 0:
                    raise ValueError("division by a non-constant")
                acc = acc * (1 / Fraction(d.terms.get((0,) * len(variables), 0)))
                continue
            if peek() == ("op", "*"):
                take()
            acc = acc * power()
        return acc

    def power():
        base = atom()
        if peek() == ("op", "^"):
            take()
            kind, val = take()
            if kind != "num" or val.denominator != 1:
                raise ValueError("exponents must be non-negative integers")
            base = base ** int(val)
        return base

    def atom():
        kind, val = take()
        if kind == "num":
            return MPoly.const(variables, val if val.denominator != 1 else int(val))
        if kind == "var":
            return MPoly.var(variables, val)
        if (kind, val) == ("op", "("):
            inner = expr()
            if take() != ("op", ")"):
                raise ValueError("unbalanced parentheses")
            return inner
        if (kind, val) == ("op", "-"):
            return -power()
        raise ValueError(f"unexpected token {val!r}")

    result = expr()
    if peek()[0] != "end":
        raise ValueError(f"trailing input in polynomial: {peek()[1]!r}")
    return result


def monomials(nvars: int, degree: int) -> Iterable[tuple]:
    """All exponent vectors of total degree ``degree`` (graded-lex descending)."""
    for e in product(range(degree, -1, -1), repeat=nvars):
        if sum(e) == degree:
            yield e
