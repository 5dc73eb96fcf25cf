"""Sampled scalar fields on regular grids, with finite-difference calculus.

Fields carry per-axis spacing and periodicity.  Derivatives use central
stencils: exact for quadratics, O(h^2) otherwise.  Nodes on a
non-periodic boundary have no trustworthy stencil and are excluded from
gradient/Hessian queries rather than approximated one-sidedly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np


class GridMismatchError(ValueError):
    pass


class BoundaryNodeError(ValueError):
    pass


@dataclass(frozen=True)
class ScalarField:
    dims: Tuple[int, ...]
    spacing: Tuple[float, ...]
    periodic: Tuple[bool, ...]
    values: np.ndarray

    def __post_init__(self):
        dims = tuple(int(n) for n in self.dims)
        spacing = tuple(float(h) for h in self.spacing)
        periodic = tuple(bool(p) for p in self.periodic)
        if not (len(dims) == len(spacing) == len(periodic)):
            raise ValueError("dims, spacing, periodic must have equal length")
        if any(h <= 0 for h in spacing):
            raise ValueError("spacing must be positive on every axis")
        values = np.ascontiguousarray(self.values, dtype=float).reshape(dims)
        if not np.all(np.isfinite(values)):
            raise ValueError("field values must be finite")
        values.flags.writeable = False
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "spacing", spacing)
        object.__setattr__(self, "periodic", periodic)
        object.__setattr__(self, "values", values)

    @property
    def ndim(self) -> int:
        return len(self.dims)

    @classmethod
    def sample(cls, dims: Sequence[int], spacing: Sequence[float],
               periodic: Sequence[bool], fn: Callable[..., float],
               origin: Optional[Sequence[float]] = None) -> "ScalarField":
        """Evaluate fn on the grid nodes origin + i*h (vectorized per node)."""
        dims = tuple(int(n) for n in dims)
        spacing = tuple(float(h) for h in spacing)
        if origin is None:
            origin = (0.0,) * len(dims)
        axes = [origin[a] + spacing[a] * np.arange(dims[a]) for a in range(len(dims))]
        grids = np.meshgrid(*axes, indexing="ij") if len(dims) > 1 else [axes[0]]
        values = fn(*grids)
        return cls(dims, spacing, tuple(periodic), np.asarray(values, dtype=float))

    def same_grid(self, other: "ScalarField") -> bool:
        return (self.dims == other.dims and self.spacing == other.spacing
                and self.periodic == other.periodic)

    def require_same_grid(self, other: "ScalarField") -> None:
        if not self.same_grid(other):
            raise GridMismatchError("fields live on different grids")

    def with_values(self, values: np.ndarray) -> "ScalarField":
        return ScalarField(self.dims, self.spacing, self.periodic, values)

    def sub(self, other: "ScalarField", scale: float = 1.0) -> "ScalarField":
        self.require_same_grid(other)
        return self.with_values(self.values - scale * other.values)

    def shift(self, constant: float) -> "ScalarField":
        return self.with_values(self.values - constant)

    def to_json(self) -> dict:
        return {
            "dims": list(self.dims),
            "spacing": list(self.spacing),
            "periodic": [int(p) for p in self.periodic],
            "values": [float(v) for v in self.values.reshape(-1)],
        }

    @classmethod
    def from_json(cls, data: dict) -> "ScalarField":
        dims = tuple(int(n) for n in data["dims"])
        return cls(dims,
                   tuple(float(h) for h in data["spacing"]),
                   tuple(bool(p) for p in data["periodic"]),
                   np.array(data["values"], dtype=float).reshape(dims))


def stencil_mask(field: ScalarField) -> np.ndarray:
    """Nodes where central differences are available on every axis."""
    ok = np.ones(field.dims, dtype=bool)
    for a in range(field.ndim):
        if field.periodic[a]:
            continue
        sl_lo = [slice(None)] * field.ndim
        sl_hi = [slice(None)] * field.ndim
        sl_lo[a] = 0
        sl_hi[a] = field.dims[a] - 1
        ok[tuple(sl_lo)] = False
        ok[tuple(sl_hi)] = False
    return ok


def gradient(field: ScalarField) -> Tuple[np.ndarray, np.ndarray]:
    """Central-difference gradient.

    Returns (grad, valid) where grad has shape dims + (ndim,) and valid
    marks nodes whose full stencil exists; grad is zero-filled elsewhere.
    """
    v = field.values
    grad = np.zeros(field.dims + (field.ndim,), dtype=float)
    for a in range(field.ndim):
        fwd = np.roll(v, -1, axis=a)
        bwd = np.roll(v, 1, axis=a)
        grad[..., a] = (fwd - bwd) / (2.0 * field.spacing[a])
    valid = stencil_mask(field)
    grad[~valid] = 0.0
    return grad, valid


def gradient_magnitude(field: ScalarField) -> Tuple[np.ndarray, np.ndarray]:
    grad, valid = gradient(field)
    return np.sqrt((grad ** 2).sum(axis=-1)), valid


def node_value(field: ScalarField, node: Sequence[int], offset: Sequence[int]) -> float:
    idx = []
    for a, (i, d) in enumerate(zip(node, offset)):
        j = i + d
        if field.periodic[a]:
            j %= field.dims[a]
        elif not (0 <= j < field.dims[a]):
            raise BoundaryNodeError(f"stencil leaves the grid at node {tuple(node)}")
        idx.append(j)
    return float(field.values[tuple(idx)])


def hessian_at(field: ScalarField, node: Sequence[int]) -> np.ndarray:
    """Symmetric central second differences at a grid node.

    Raises BoundaryNodeError when the node sits on a non-periodic
    boundary (one-sided stencils are not trusted).
    """
    node = tuple(int(i) for i in node)
    d = field.ndim
    h = field.spacing
    H = np.zeros((d, d), dtype=float)
    f0 = node_value(field, node, (0,) * d)
    for a in range(d):
        ea = [0] * d
        ea[a] = 1
        up = node_value(field, node, tuple(ea))
        ea[a] = -1
        dn = node_value(field, node, tuple(ea))
        H[a, a] = (up - 2.0 * f0 + dn) / (h[a] * h[a])
    for a in range(d):
        for b in range(a + 1, d):
            off = [0] * d

            def corner(sa, sb):
                off[a], off[b] = sa, sb
                return node_value(field, node, tuple(off))

            val = (corner(1, 1) - corner(1, -1) - corner(-1, 1) + corner(-1, -1))
            H[a, b] = H[b, a] = val / (4.0 * h[a] * h[b])
    return H


def eig_sym(m: np.ndarray, eig_tol: float = 1e-12) -> Tuple[np.ndarray, np.ndarray]:
    """Eigenvalues and eigenvectors of a symmetric matrix by cyclic Jacobi.

    Sweeps rotate away off-diagonal mass until its Frobenius norm drops
    below eig_tol * max(1, |m|_max).  Returns (w, V) with w ascending and
    V[:, i] the unit eigenvector for w[i].
    """
    A = np.array(m, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("eig_sym expects a square matrix")
    n = A.shape[0]
    if n == 0:
        return np.zeros(0), np.zeros((0, 0))
    scale = max(1.0, float(np.abs(A).max()))
    if float(np.abs(A - A.T).max()) > 1e-9 * scale:
        raise ValueError("eig_sym expects a symmetric matrix")
    A = 0.5 * (A + A.T)
    V = np.eye(n)
    target = eig_tol * scale
    for _ in range(100):
        off = np.sqrt(np.sum(np.tril(A, -1) ** 2) * 2.0)
        if off <= target or n == 1:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= 1e-300:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta == 0.0:
                    t = 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rot = np.eye(n)
                rot[p, p] = rot[q, q] = c
                rot[p, q] = s
                rot[q, p] = -s
                A = rot.T @ A @ rot
                V = V @ rot
    w = np.diag(A).copy()
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]


def default_grad_tol(field: ScalarField) -> float:
    """O(h^2) stencil accuracy scaled by the field's gradient range."""
    mag, valid = gradient_magnitude(field)
    grange = float(mag[valid].max()) if valid.any() else 1.0
    hbar = float(np.mean(field.spacing))
    return 10.0 * hbar * hbar * max(grange, 1e-12)


def c1_distance(f: ScalarField, g: ScalarField) -> float:
    """max |f - g| plus max |grad f - grad g| over stencil-valid nodes."""
    f.require_same_grid(g)
    d0 = float(np.abs(f.values - g.values).max())
    gf, valid = gradient(f)
    gg, _ = gradient(g)
    diff = np.sqrt(((gf - gg) ** 2).sum(axis=-1))
    d1 = float(diff[valid].max()) if valid.any() else 0.0
    return d0 + d1
