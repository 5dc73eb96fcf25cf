"""Cubical complexes of grid masks and their GF(2) homology.

A GridMask is a binary image on a regular grid: one membership bit per
top-dimensional cell, with optional periodic axes (index n identifies
with index 0).  The complex of a mask is the closure of its included top
cells under taking faces; cells are elementary cubes, encoded as an
anchor vertex plus a 0/1 extent per axis.  Periodic identifications are
realized by index arithmetic mod n, never by ghost cells, so the square
of the boundary operator vanishes exactly.

Homology is taken over GF(2) throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .gf2 import GF2Matrix


class EmptyMaskError(ValueError):
    pass


Cell = Tuple[Tuple[int, ...], Tuple[int, ...]]  # (anchor per axis, extent bit per axis)


@dataclass(frozen=True)
class GridMask:
    dims: Tuple[int, ...]
    periodic: Tuple[bool, ...]
    cells: np.ndarray

    def __post_init__(self):
        dims = tuple(int(n) for n in self.dims)
        periodic = tuple(bool(p) for p in self.periodic)
        if len(dims) != len(periodic):
            raise ValueError("dims and periodic must have equal length")
        if any(n < 1 for n in dims):
            raise ValueError("all axis sizes must be >= 1")
        cells = np.ascontiguousarray(self.cells, dtype=bool).reshape(dims)
        cells.flags.writeable = False
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "periodic", periodic)
        object.__setattr__(self, "cells", cells)

    @classmethod
    def full(cls, dims: Sequence[int], periodic: Sequence[bool]) -> "GridMask":
        return cls(tuple(dims), tuple(periodic), np.ones(tuple(dims), dtype=bool))

    @property
    def ndim(self) -> int:
        return len(self.dims)

    def count(self) -> int:
        return int(self.cells.sum())

    def product(self, other: "GridMask") -> "GridMask":
        cells = np.multiply.outer(self.cells, other.cells)
        return GridMask(self.dims + other.dims, self.periodic + other.periodic, cells)

    def refine(self, factor: int = 2) -> "GridMask":
        cells = self.cells
        for axis in range(self.ndim):
            cells = np.repeat(cells, factor, axis=axis)
        return GridMask(tuple(n * factor for n in self.dims), self.periodic, cells)

    def to_json(self) -> dict:
        return {
            "dims": list(self.dims),
            "periodic": [int(p) for p in self.periodic],
            "cells": [int(v) for v in self.cells.reshape(-1)],
        }

    @classmethod
    def from_json(cls, data: dict) -> "GridMask":
        dims = tuple(int(n) for n in data["dims"])
        periodic = tuple(bool(p) for p in data["periodic"])
        cells = np.array(data["cells"], dtype=bool).reshape(dims)
        return cls(dims, periodic, cells)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GridMask):
            return NotImplemented
        return (self.dims == other.dims and self.periodic == other.periodic
                and np.array_equal(self.cells, other.cells))

    def __hash__(self):
        return hash((self.dims, self.periodic, self.cells.tobytes()))


@dataclass(frozen=True)
class CubicalComplex:
    dims: Tuple[int, ...]
    periodic: Tuple[bool, ...]
    cells_by_dim: Tuple[Tuple[Cell, ...], ...]
    boundary: Dict[int, GF2Matrix] = field(hash=False)

    def n_cells(self, k: int) -> int:
        if 0 <= k < len(self.cells_by_dim):
            return len(self.cells_by_dim[k])
        return 0

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * self.n_cells(k) for k in range(len(self.cells_by_dim)))


def _cell_faces(cell: Cell, dims, periodic):
    anchors, extents = cell
    for a, e in enumerate(extents):
        if not e:
            continue
        low_ext = extents[:a] + (0,) + extents[a + 1:]
        yield (anchors, low_ext)
        up = anchors[a] + 1
        if periodic[a]:
            up %= dims[a]
        yield (anchors[:a] + (up,) + anchors[a + 1:], low_ext)


def build_complex(mask: GridMask) -> CubicalComplex:
    """Closure of the included top cells with GF(2) boundary matrices."""
    if not mask.cells.any():
        raise EmptyMaskError("mask contains no cells")
    d = mask.ndim
    dims, periodic = mask.dims, mask.periodic

    levels: List[set] = [set() for _ in range(d + 1)]
    top_extent = (1,) * d
    for idx in np.argwhere(mask.cells):
        levels[d].add((tuple(int(i) for i in idx), top_extent))
    for k in range(d, 0, -1):
        for cell in levels[k]:
            for face in _cell_faces(cell, dims, periodic):
                levels[k - 1].add(face)

    cells_by_dim = tuple(tuple(sorted(level)) for level in levels)
    index = [{cell: i for i, cell in enumerate(level)} for level in cells_by_dim]

    boundary: Dict[int, GF2Matrix] = {}
    for k in range(1, d + 1):
        n_rows = len(cells_by_dim[k - 1])
        n_cols = len(cells_by_dim[k])
        dense = np.zeros((n_rows, n_cols), dtype=np.uint8)
        for j, cell in enumerate(cells_by_dim[k]):
            for face in _cell_faces(cell, dims, periodic):
                dense[index[k - 1][face], j] ^= 1  # repeated face cancels mod 2
        boundary[k] = GF2Matrix.from_dense(dense) if n_cols else GF2Matrix(n_rows, 0)
    boundary[0] = GF2Matrix(0, len(cells_by_dim[0]))
    return CubicalComplex(dims, periodic, cells_by_dim, boundary)


def validate_boundary(cx: CubicalComplex) -> None:
    """Assert boundary(k-1) @ boundary(k) == 0 for every k."""
    for k in range(2, len(cx.cells_by_dim)):
        if not cx.boundary[k - 1].mul(cx.boundary[k]).is_zero():
            raise AssertionError(f"boundary squared is nonzero between dims {k} and {k-2}")


def betti(cx: CubicalComplex) -> Tuple[int, ...]:
    """betti_k = dim ker boundary_k - rank boundary_{k+1} over GF(2)."""
    d = len(cx.cells_by_dim) - 1
    ranks = {k: cx.boundary[k].rank() for k in range(d + 1)}
    out = []
    for k in range(d + 1):
        nk = cx.n_cells(k)
        r_k = ranks[k] if k >= 1 else 0
        r_k1 = ranks.get(k + 1, 0)
        out.append(nk - r_k - r_k1)
    return tuple(out)


def betti_of_mask(mask: GridMask) -> Tuple[int, ...]:
    return betti(build_complex(mask))


def betti_product_check(a: Sequence[int], b: Sequence[int]) -> Tuple[int, ...]:
    """Graded convolution c_n = sum_k a_k * b_{n-k} (field Kuenneth rule)."""
    a = list(a)
    b = list(b)
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return tuple(out)
