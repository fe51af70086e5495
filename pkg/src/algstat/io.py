"""JSON encodings for rationals, tables, symmetric matrices and signatures."""

from __future__ import annotations

import json
from fractions import Fraction


def format_rat(x) -> str:
    x = Fraction(int(x)) if hasattr(x, "p") and hasattr(x, "value") else Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rat(s) -> Fraction:
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    if isinstance(s, float):
        raise TypeError("floats are not accepted as exact rationals; pass a string like '1/3'")
    return Fraction(str(s).strip())


def dumps(obj) -> str:
    """Deterministic JSON: sorted keys, fixed separators."""
    return json.dumps(obj, sort_keys=True, indent=2, separators=(",", ": "))


def load_json(path):
    with open(path) as fh:
        return json.load(fh)
