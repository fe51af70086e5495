"""Three-way tables, their slices, and the rank-r parametrisation."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from algstat.io import format_rat, parse_rat


@dataclass(frozen=True)
class Table3:
    """Dense d1 x d2 x d3 table; entry (i, j, k) sits at ``i*d2*d3 + j*d3 + k``."""

    dims: tuple
    entries: tuple

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if len(dims) != 3 or min(dims) < 1:
            raise ValueError(f"Table3 needs three positive dims, got {dims}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "entries", tuple(self.entries))
        if len(self.entries) != dims[0] * dims[1] * dims[2]:
            raise ValueError("entries length does not match dims")

    @classmethod
    def from_array(cls, arr):
        arr = np.asarray(arr, dtype=object)
        return cls(arr.shape, tuple(arr.reshape(-1).tolist()))

    def array(self):
        return np.array(self.entries, dtype=object).reshape(self.dims)

    def __getitem__(self, ijk):
        i, j, k = ijk
        _, d2, d3 = self.dims
        return self.entries[i * d2 * d3 + j * d3 + k]

    def to_json(self):
        return {"dims": list(self.dims), "entries": [format_rat(x) for x in self.entries]}

    @classmethod
    def from_json(cls, data):
        return cls(tuple(data["dims"]), tuple(parse_rat(x) for x in data["entries"]))


@dataclass(frozen=True)
class ParamTriple:
    """Factor matrices; row l of each belongs to hidden state l."""

    rho: tuple
    sigma: tuple
    theta: tuple

    def __post_init__(self):
        for name in ("rho", "sigma", "theta"):
            object.__setattr__(self, name, tuple(tuple(r) for r in getattr(self, name)))
        if not (len(self.rho) == len(self.sigma) == len(self.theta)):
            raise ValueError("factor matrices must have the same number of rows (the rank)")

    @property
    def r(self):
        return len(self.rho)

    @property
    def dims(self):
        return (len(self.rho[0]), len(self.sigma[0]), len(self.theta[0]))


def synthesize(params: ParamTriple, dims=None) -> Table3:
    """p_ijk = sum_l rho[l,i] * sigma[l,j] * theta[l,k], computed exactly."""
    d = params.dims
    if dims is not None and tuple(dims) != d:
        raise ValueError(f"factor dims {d} do not match requested dims {tuple(dims)}")
    for name in ("rho", "sigma", "theta"):
        rows = getattr(params, name)
        if len({len(r) for r in rows}) != 1:
            raise ValueError(f"ragged factor matrix {name}")
    out = [0] * (d[0] * d[1] * d[2])
    for a, b, c in zip(params.rho, params.sigma, params.theta):
        for i, j, k in product(range(d[0]), range(d[1]), range(d[2])):
            out[i * d[1] * d[2] + j * d[2] + k] += a[i] * b[j] * c[k]
    return Table3(d, tuple(out))


def slice_(T: Table3, axis: int, index: int):
    """2-way slice fixing ``axis`` (1, 2 or 3) at ``index``, as a list of rows.

    The remaining two axes keep their order, so axis 1 gives rows j and
    columns k.
    """
    if axis not in (1, 2, 3):
        raise ValueError("axis must be 1, 2 or 3")
    if not 0 <= index < T.dims[axis - 1]:
        raise IndexError(f"index {index} out of range for axis {axis}")
    arr = T.array()
    sl = np.take(arr, index, axis=axis - 1)
    return sl.tolist()


def stack_slices(slices, axis: int) -> Table3:
    arr = np.stack([np.array(s, dtype=object) for s in slices], axis=axis - 1)
    return Table3.from_array(arr)


def subtable(T: Table3, sel1, sel2, sel3) -> Table3:
    sels = []
    for ax, sel in enumerate((sel1, sel2, sel3)):
        sel = list(sel)
        if not sel:
            raise ValueError("empty index selection")
        if any(b <= a for a, b in zip(sel, sel[1:])):
            raise ValueError("index selections must be strictly increasing")
        if sel[0] < 0 or sel[-1] >= T.dims[ax]:
            raise IndexError(f"selection {sel} out of range on axis {ax + 1}")
        sels.append(sel)
    return Table3.from_array(T.array()[np.ix_(*sels)])


def _nonzero_rows(rng, r, d, height):
    while True:
        m = rng.integers(-height, height + 1, size=(r, d))
        if np.all(np.any(m != 0, axis=1)):
            return [[int(x) for x in row] for row in m]


def random_low_rank(dims=(4, 4, 4), rank=4, height=10, seed=0):
    """Random integer factors in [-height, height] and the table they produce.

    Rows that come out all-zero are resampled. Deterministic in ``seed``.
    """
    if rank < 1:
        raise ValueError("rank must be at least 1")
    rng = np.random.default_rng(seed)
    d1, d2, d3 = dims
    params = ParamTriple(
        _nonzero_rows(rng, rank, d1, height),
        _nonzero_rows(rng, rank, d2, height),
        _nonzero_rows(rng, rank, d3, height),
    )
    return synthesize(params), params


def as_fraction_table(T: Table3) -> Table3:
    return Table3(T.dims, tuple(Fraction(x) for x in T.entries))
