"""Critical-set degeneracy analysis for sampled functions.

The degeneracy ladder, from most to least rigid:

  morse            isolated nondegenerate critical points
  morse_bott       critical submanifold, Hessian kernel = its tangent space
  flattened        f|_S minimal along C and ker Hess_x f = T_x S on C
  minimally        f|_S minimal along C and T_x S a maximal subspace on
  degenerate       which Hess_x f is positive semi-definite
  qmd              an auxiliary tau >= 0 with tau^-1(0) = C, Hessian-kernel
                   transversality, and f - tau flattened along (C, S)

The companion submanifold S is restricted to coordinate-aligned charts:
S = {off-chart coordinates frozen to a base node}.  A minimally
degenerate pair (C, S) always admits a compliant tau, built here as
tau = dist(x, S)^4 + f(project_S(x)) - min_C f near C.

The flattening perturbation replaces f by rho(f) where rho vanishes
below delta/2 and is the identity above delta; the sublevel set
{f <= delta/2} becomes a codimension-0 thickening of C with the same
homotopy type, which the thickening verifier checks through Betti
numbers and discrete gradient descent.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .cubical import GridMask, betti_of_mask
from .fields import (ScalarField, eig_sym, gradient_magnitude, hessian_at,
                     stencil_mask)


class NoCriticalPointsError(ValueError):
    pass


class ChartError(ValueError):
    pass


class TauError(ValueError):
    pass


class RegularValueError(RuntimeError):
    """delta/2 could not be nudged onto a regular value."""


class DescentEscapeError(RuntimeError):
    """Steepest descent left the isolating box: the input is not isolated."""


class ConstructionError(RuntimeError):
    pass


@dataclass(frozen=True)
class Tolerances:
    grad_tol: float = 1e-6
    eig_tol: float = 1e-6       # relative: |lam| < eig_tol * max(1, spectral radius)
    value_tol: float = 1e-9
    angle_tol: float = 1e-6     # radians, eigenspace vs chart alignment
    floor_factor: float = 4.0   # Hessian entries below floor_factor * h_max^2
    hess_floor: Optional[float] = None  # are discretization noise; None = derive

    def floor_for(self, f: "ScalarField") -> float:
        if self.hess_floor is not None:
            return self.hess_floor
        return self.floor_factor * max(f.spacing) ** 2


@dataclass(frozen=True)
class SubmanifoldChart:
    """Coordinate-aligned submanifold: off-chart coordinates pinned to base.

    axes may be empty: the chart degenerates to the single point `base`.
    """
    axes: Tuple[int, ...]
    base: Tuple[int, ...]

    def __post_init__(self):
        axes = tuple(sorted(int(a) for a in self.axes))
        base = tuple(int(b) for b in self.base)
        if len(set(axes)) != len(axes):
            raise ChartError("chart axes must be distinct")
        if any(a < 0 or a >= len(base) for a in axes):
            raise ChartError("chart axis outside the grid")
        object.__setattr__(self, "axes", axes)
        object.__setattr__(self, "base", base)

    @property
    def dim(self) -> int:
        return len(self.axes)

    def off_axes(self, ndim: int) -> Tuple[int, ...]:
        return tuple(a for a in range(ndim) if a not in self.axes)

    def contains_node(self, node: Sequence[int]) -> bool:
        return all(node[a] == self.base[a]
                   for a in range(len(self.base)) if a not in self.axes)

    def project(self, node: Sequence[int]) -> Tuple[int, ...]:
        return tuple(node[a] if a in self.axes else self.base[a]
                     for a in range(len(self.base)))

    def slice_mask(self, dims: Sequence[int]) -> np.ndarray:
        mask = np.ones(tuple(dims), dtype=bool)
        for a in range(len(dims)):
            if a in self.axes:
                continue
            sl = [slice(None)] * len(dims)
            keep = np.zeros(dims[a], dtype=bool)
            keep[self.base[a]] = True
            sl[a] = ~keep
            mask[tuple(sl)] = False
        return mask

    def distance_to(self, node: Sequence[int], spacing: Sequence[float],
                    periodic: Sequence[bool], dims: Sequence[int]) -> float:
        total = 0.0
        for a in range(len(dims)):
            if a in self.axes:
                continue
            d = abs(node[a] - self.base[a])
            if periodic[a]:
                d = min(d, dims[a] - d)
            total += (d * spacing[a]) ** 2
        return float(np.sqrt(total))


@dataclass(frozen=True)
class CriticalSet:
    components: Tuple[GridMask, ...]
    grad_tol: float

    def component_nodes(self, i: int) -> List[Tuple[int, ...]]:
        return [tuple(int(v) for v in idx)
                for idx in np.argwhere(self.components[i].cells)]

    def union_mask(self) -> np.ndarray:
        out = np.zeros(self.components[0].dims, dtype=bool)
        for comp in self.components:
            out |= comp.cells
        return out


@dataclass
class DegeneracyReport:
    classification: str
    details: Dict[str, bool] = dc_field(default_factory=dict)
    hessian_spectra: List[List[float]] = dc_field(default_factory=list)
    negative_index: Optional[int] = None
    sampled_nodes: List[Tuple[int, ...]] = dc_field(default_factory=list)
    notes: List[str] = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.classification != "unclassified"

    def to_json(self) -> dict:
        return {
            "classification": self.classification,
            "details": {k: bool(v) for k, v in sorted(self.details.items())},
            "hessian_spectra": [[float(x) for x in spec] for spec in self.hessian_spectra],
            "negative_index": self.negative_index,
            "sampled_nodes": [list(n) for n in self.sampled_nodes],
            "notes": list(self.notes),
        }


# -- detection ---------------------------------------------------------


def critical_node_mask(f: ScalarField, grad_tol: float) -> np.ndarray:
    """Stencil-valid nodes with |grad f| < grad_tol."""
    if grad_tol <= 0:
        raise ValueError("grad_tol must be positive")
    mag, valid = gradient_magnitude(f)
    return (mag < grad_tol) & valid


def _neighbors(node, dims, periodic):
    for a in range(len(dims)):
        for d in (-1, 1):
            j = node[a] + d
            if periodic[a]:
                j %= dims[a]
            elif not (0 <= j < dims[a]):
                continue
            yield node[:a] + (j,) + node[a + 1:]


def connected_components(mask: np.ndarray, periodic: Sequence[bool]) -> List[np.ndarray]:
    dims = mask.shape
    seen = np.zeros(dims, dtype=bool)
    comps = []
    for start in map(tuple, np.argwhere(mask)):
        if seen[start]:
            continue
        comp = np.zeros(dims, dtype=bool)
        stack = [start]
        seen[start] = True
        while stack:
            node = stack.pop()
            comp[node] = True
            for nb in _neighbors(node, dims, periodic):
                if mask[nb] and not seen[nb]:
                    seen[nb] = True
                    stack.append(nb)
        comps.append(comp)
    comps.sort(key=lambda c: tuple(int(v) for v in np.argwhere(c)[0]))
    return comps


def detect_critical_set(f: ScalarField, grad_tol: float) -> CriticalSet:
    mask = critical_node_mask(f, grad_tol)
    if not mask.any():
        raise NoCriticalPointsError("no nodes below the gradient threshold")
    comps = connected_components(mask, f.periodic)
    return CriticalSet(tuple(GridMask(f.dims, f.periodic, c) for c in comps),
                       float(grad_tol))


def _axis_interval(indices: np.ndarray, n: int, periodic: bool, margin: int):
    """Smallest (circular) index interval covering `indices`, inflated."""
    present = np.zeros(n, dtype=bool)
    present[indices] = True
    if present.all():
        return np.ones(n, dtype=bool)
    if not periodic:
        lo = max(0, int(indices.min()) - margin)
        hi = min(n - 1, int(indices.max()) + margin)
        out = np.zeros(n, dtype=bool)
        out[lo:hi + 1] = True
        return out
    # periodic: cover the complement of the largest circular run of absences
    idx = np.sort(np.unique(indices))
    m = len(idx)
    strides = [((int(idx[(i + 1) % m] - idx[i]) - 1) % n + 1, i) for i in range(m)]
    stride, gi = max(strides)
    start = int(idx[(gi + 1) % m]) - margin
    covered = (n - stride + 1) + 2 * margin
    if covered >= n:
        return np.ones(n, dtype=bool)
    out = np.zeros(n, dtype=bool)
    for k in range(covered):
        out[(start + k) % n] = True
    return out


def isolating_box(component: GridMask, margin: int = 3) -> np.ndarray:
    """Bounding box of a component inflated by `margin` cells, as a node mask."""
    nodes = np.argwhere(component.cells)
    if nodes.size == 0:
        raise ValueError("empty component")
    box = np.ones(component.dims, dtype=bool)
    for a, n in enumerate(component.dims):
        keep = _axis_interval(nodes[:, a], n, component.periodic[a], margin)
        sl = [None] * len(component.dims)
        shape = [1] * len(component.dims)
        shape[a] = n
        box &= keep.reshape(shape)
    return box


# -- Hessian sampling helpers -------------------------------------------


def _sample_nodes(f: ScalarField, comp: GridMask) -> List[Tuple[int, ...]]:
    ok = stencil_mask(f)
    return [tuple(int(v) for v in idx)
            for idx in np.argwhere(comp.cells & ok)]


def default_hessian_floor(f: ScalarField, factor: float = 4.0) -> float:
    """Central second differences carry O(h^2) truncation error (2*h^2
    exactly for a flat quartic), so eigenvalues below a few h^2 are
    indistinguishable from zero regardless of the matrix's own scale."""
    return factor * max(f.spacing) ** 2


def _kernel_threshold(w: np.ndarray, eig_tol: float, floor: float = 0.0) -> float:
    radius = float(np.abs(w).max()) if w.size else 0.0
    return max(eig_tol * max(1.0, radius), floor)


def negative_index(f: ScalarField, node: Sequence[int], eig_tol: float,
                   floor: Optional[float] = None) -> int:
    if floor is None:
        floor = default_hessian_floor(f)
    w, _ = eig_sym(hessian_at(f, node))
    return int(np.sum(w < -_kernel_threshold(w, eig_tol, floor)))


def transverse_negative_index(f: ScalarField, node: Sequence[int],
                              chart: SubmanifoldChart, eig_tol: float,
                              floor: Optional[float] = None) -> int:
    if floor is None:
        floor = default_hessian_floor(f)
    off = chart.off_axes(f.ndim)
    if not off:
        return 0
    H = hessian_at(f, node)
    sub = H[np.ix_(off, off)]
    w, _ = eig_sym(sub)
    return int(np.sum(w < -_kernel_threshold(w, eig_tol, floor)))


def index_preserved(f: ScalarField, f_check: ScalarField, crit: CriticalSet,
                    chart: SubmanifoldChart, eig_tol: float = 1e-6,
                    component: int = 0) -> bool:
    """Transverse negative index identical before/after the perturbation."""
    f.require_same_grid(f_check)
    comp = crit.components[component]
    for node in _sample_nodes(f, comp):
        before = transverse_negative_index(f, node, chart, eig_tol)
        after = transverse_negative_index(f_check, node, chart, eig_tol)
        if before != after:
            return False
    return True


# -- degeneracy checkers -------------------------------------------------


def _grid_distance_to_component(comp: GridMask) -> np.ndarray:
    """Chebyshev-style BFS distance (in cells) from every node to the component."""
    dims = comp.dims
    dist = np.full(dims, -1, dtype=int)
    frontier = [tuple(int(v) for v in idx) for idx in np.argwhere(comp.cells)]
    for node in frontier:
        dist[node] = 0
    d = 0
    while frontier:
        nxt = []
        for node in frontier:
            for nb in _neighbors(node, dims, comp.periodic):
                if dist[nb] < 0:
                    dist[nb] = d + 1
                    nxt.append(nb)
        frontier = nxt
        d += 1
    return dist


def _check_minimum_on_slice(f: ScalarField, comp: GridMask, chart: SubmanifoldChart,
                            box: np.ndarray, tols: Tolerances, strict: bool):
    """f restricted to the chart slice attains its minimum on C (within tolerance).

    In strict mode, slice nodes farther than 2 cells from C must exceed
    the minimum by more than value_tol (guard band against grid noise).
    """
    slice_mask = chart.slice_mask(f.dims) & box
    comp_vals = f.values[comp.cells]
    fmin = float(comp_vals.min())
    on_c_flat = bool((comp_vals <= fmin + tols.value_tol).all())
    others = slice_mask & ~comp.cells
    no_lower = True
    if others.any():
        no_lower = bool((f.values[others] >= fmin - tols.value_tol).all())
    cond = on_c_flat and no_lower
    if strict and cond:
        dist = _grid_distance_to_component(comp)
        far = others & (dist > 2)
        if far.any():
            cond = bool((f.values[far] > fmin + tols.value_tol).all())
    return cond, fmin


def _require_contained(comp: GridMask, chart: SubmanifoldChart):
    for node in map(tuple, np.argwhere(comp.cells)):
        if not chart.contains_node(node):
            raise ChartError(f"critical component leaves the chart at node {node}")


def _principal_alignment(kernel_vectors: np.ndarray, axes: Sequence[int], ndim: int) -> float:
    """Largest principal angle (radians) between span(kernel) and the chart axes."""
    if kernel_vectors.shape[1] == 0:
        return 0.0
    E = np.zeros((ndim, len(axes)))
    for j, a in enumerate(axes):
        E[a, j] = 1.0
    sv = np.linalg.svd(kernel_vectors.T @ E, compute_uv=False)
    k = min(kernel_vectors.shape[1], len(axes))
    smallest_cos = float(sv[k - 1]) if k >= 1 else 1.0
    return float(np.arccos(np.clip(smallest_cos, -1.0, 1.0)))


def check_flattened_degenerate(f: ScalarField, crit: CriticalSet,
                               chart: SubmanifoldChart, tols: Tolerances,
                               strict: bool = False, component: int = 0,
                               margin: int = 3) -> DegeneracyReport:
    """f|_S minimal along C and ker Hess_x f = T_x S at sampled x in C."""
    comp = crit.components[component]
    _require_contained(comp, chart)
    box = isolating_box(comp, margin)
    report = DegeneracyReport("unclassified")
    cond_min, _ = _check_minimum_on_slice(f, comp, chart, box, tols, strict)
    report.details["restricted_minimum_on_c"] = cond_min

    kernel_ok = True
    floor = tols.floor_for(f)
    for node in _sample_nodes(f, comp):
        w, V = eig_sym(hessian_at(f, node))
        report.sampled_nodes.append(node)
        report.hessian_spectra.append([float(x) for x in w])
        thresh = _kernel_threshold(w, tols.eig_tol, floor)
        kernel_idx = np.nonzero(np.abs(w) < thresh)[0]
        if len(kernel_idx) != chart.dim:
            kernel_ok = False
            continue
        angle = _principal_alignment(V[:, kernel_idx], chart.axes, f.ndim)
        if angle > tols.angle_tol:
            kernel_ok = False
    report.details["hessian_kernel_equals_chart"] = kernel_ok

    if cond_min and kernel_ok and report.sampled_nodes:
        report.classification = "flattened_degenerate"
    return report


def check_minimally_degenerate(f: ScalarField, crit: CriticalSet,
                               chart: SubmanifoldChart, tols: Tolerances,
                               strict: bool = False, component: int = 0,
                               margin: int = 3) -> DegeneracyReport:
    """f|_S minimal along C; T_x S maximal among Hessian-nonnegative subspaces.

    Maximality is tested as: Hess restricted to the chart axes has no
    eigenvalue below -tol, and dim S equals the ambient dimension minus
    the number of negative Hessian eigenvalues at every sampled node.
    """
    comp = crit.components[component]
    _require_contained(comp, chart)
    box = isolating_box(comp, margin)
    report = DegeneracyReport("unclassified")
    cond_min, _ = _check_minimum_on_slice(f, comp, chart, box, tols, strict)
    report.details["restricted_minimum_on_c"] = cond_min

    psd_ok = True
    maximal_ok = True
    neg_counts = set()
    axes = list(chart.axes)
    floor = tols.floor_for(f)
    for node in _sample_nodes(f, comp):
        H = hessian_at(f, node)
        w, _ = eig_sym(H)
        report.sampled_nodes.append(node)
        report.hessian_spectra.append([float(x) for x in w])
        thresh = _kernel_threshold(w, tols.eig_tol, floor)
        n_neg = int(np.sum(w < -thresh))
        neg_counts.add(n_neg)
        if axes:
            ws, _ = eig_sym(H[np.ix_(axes, axes)])
            if ws.size and float(ws.min()) < -thresh:
                psd_ok = False
        if chart.dim != f.ndim - n_neg:
            maximal_ok = False
    report.details["hessian_psd_on_chart"] = psd_ok
    report.details["chart_dimension_maximal"] = maximal_ok
    if len(neg_counts) == 1:
        report.negative_index = neg_counts.pop()

    if cond_min and psd_ok and maximal_ok and report.sampled_nodes:
        report.classification = "minimally_degenerate"
    return report


def check_qmd(f: ScalarField, tau: ScalarField, crit: CriticalSet,
              chart: SubmanifoldChart, tols: Tolerances,
              strict: bool = False, component: int = 0,
              margin: int = 3) -> DegeneracyReport:
    """tau >= 0 vanishing exactly on C, kernel transversality, f - tau flattened."""
    f.require_same_grid(tau)
    if float(tau.values.min()) < -tols.value_tol:
        raise TauError("tau is negative beyond tolerance")
    comp = crit.components[component]
    report = DegeneracyReport("unclassified")
    report.details["tau_nonnegative"] = True

    # the zero set is compared on stencil-valid nodes only, consistent with
    # the boundary policy used by detection
    valid = stencil_mask(f)
    zero_set = (np.abs(tau.values) <= tols.value_tol) & valid
    report.details["tau_zero_set_equals_c"] = bool(
        np.array_equal(zero_set, comp.cells & valid))

    transverse_ok = True
    floor = tols.floor_for(f)
    for node in _sample_nodes(f, comp):
        w, V = eig_sym(hessian_at(tau, node))
        thresh = _kernel_threshold(w, tols.eig_tol, floor)
        kernel_idx = np.nonzero(np.abs(w) < thresh)[0]
        span = np.zeros((f.ndim, len(kernel_idx) + chart.dim))
        span[:, :len(kernel_idx)] = V[:, kernel_idx]
        for j, a in enumerate(chart.axes):
            span[a, len(kernel_idx) + j] = 1.0
        if np.linalg.matrix_rank(span, tol=1e-8) != f.ndim:
            transverse_ok = False
    report.details["tau_kernel_transverse_to_chart"] = transverse_ok

    flat = check_flattened_degenerate(f.sub(tau), crit, chart, tols,
                                      strict=strict, component=component,
                                      margin=margin)
    report.details["difference_flattened_degenerate"] = flat.passed
    report.hessian_spectra = flat.hessian_spectra
    report.sampled_nodes = flat.sampled_nodes

    if all(report.details.values()) and report.sampled_nodes:
        report.classification = "qmd"
    return report


# -- tau construction ------------------------------------------------------


def _smoothstep(t: np.ndarray) -> np.ndarray:
    t = np.clip(t, 0.0, 1.0)
    return t * t * t * (t * (6.0 * t - 15.0) + 10.0)


def _box_excess_distance(box: np.ndarray, spacing, periodic) -> np.ndarray:
    """Physical distance from each node to the box (0 inside)."""
    dims = box.shape
    axis_dist = []
    for a, n in enumerate(dims):
        others = tuple(i for i in range(len(dims)) if i != a)
        proj = box.any(axis=others) if others else box
        inside = np.nonzero(proj)[0]
        idx = np.arange(n)
        d = np.abs(idx[:, None] - inside[None, :])
        if periodic[a]:
            d = np.minimum(d, n - d)
        axis_dist.append(d.min(axis=1) * spacing[a])
    grids = np.meshgrid(*axis_dist, indexing="ij") if len(dims) > 1 else [axis_dist[0]]
    return np.sqrt(sum(g ** 2 for g in grids))


def construct_tau(f: ScalarField, crit: CriticalSet, chart: SubmanifoldChart,
                  tols: Tolerances, component: int = 0, margin: int = 3,
                  check_precondition: bool = True) -> ScalarField:
    """Auxiliary tau = dist(x, S)^4 + (f o project_S - min_C f) near C.

    Away from the isolating box the data term is faded out by a
    smoothstep and a quartic box-distance guard keeps tau positive, so
    the zero set stays exactly C on the full grid.  The output is
    validated against the qmd conditions before being returned.

    The radial formula is well-defined whenever C lies in the chart;
    minimal degeneracy is the guarantee that it succeeds, and
    check_precondition=False skips that gate for callers who only need
    the formula (the output is still validated).
    """
    if check_precondition:
        pre = check_minimally_degenerate(f, crit, chart, tols,
                                         component=component, margin=margin)
        if not pre.passed:
            raise ConstructionError("input is not minimally degenerate along "
                                    "the chart")
    comp = crit.components[component]
    box = isolating_box(comp, margin)
    fmin = float(f.values[comp.cells].min())

    dims = f.dims
    r4 = np.zeros(dims)
    proj_vals = np.zeros(dims)
    for node in itertools.product(*(range(n) for n in dims)):
        r = chart.distance_to(node, f.spacing, f.periodic, dims)
        r4[node] = r ** 4
        proj_vals[node] = f.values[chart.project(node)]

    d_box = _box_excess_distance(box, f.spacing, f.periodic)
    ramp_width = 2.0 * margin * float(np.mean(f.spacing))
    ramp = 1.0 - _smoothstep(d_box / ramp_width)
    tau_vals = r4 + ramp * (proj_vals - fmin) + d_box ** 4
    tau = f.with_values(tau_vals)

    post = check_qmd(f, tau, crit, chart, tols, component=component, margin=margin)
    if not post.passed:
        failing = [k for k, v in post.details.items() if not v]
        raise ConstructionError(f"constructed tau violates: {failing}")
    return tau


# -- flattening -------------------------------------------------------------


@dataclass(frozen=True)
class RhoProfile:
    """Flattening profile: 0 below delta/2, identity above delta.

    On the transition band the derivative ramps 0 -> plateau -> 1 with a
    quintic-smoothstep rise of relative width `w`; the plateau height
    (2 - w/2)/(1 - w) makes the profile meet the identity exactly at
    delta.  For w = 0.2 the derivative peaks at 2.375, safely inside the
    required (0, 3) band, and the profile is twice differentiable.
    """
    delta: float
    w: float = 0.2

    def __post_init__(self):
        if self.delta <= 0:
            raise ValueError("delta must be positive")
        if not (0 < self.w < 0.5):
            raise ValueError("transition width fraction must be in (0, 0.5)")

    @property
    def plateau(self) -> float:
        return (2.0 - self.w / 2.0) / (1.0 - self.w)

    def _p(self, u: np.ndarray) -> np.ndarray:
        """Derivative profile on the unit transition coordinate."""
        M, w = self.plateau, self.w
        u = np.asarray(u, dtype=float)
        out = np.full(u.shape, M)
        rise = u < w
        fall = u > 1.0 - w
        out = np.where(rise, M * _smoothstep(u / w), out)
        out = np.where(fall, 1.0 + (M - 1.0) * _smoothstep((1.0 - u) / w), out)
        return out

    def _P(self, u: np.ndarray) -> np.ndarray:
        """Antiderivative of _p with P(0) = 0 (piecewise closed form)."""
        M, w = self.plateau, self.w

        def s5_int(x):
            return x ** 4 * (x * (x - 3.0) + 2.5)

        u = np.asarray(u, dtype=float)
        out = np.empty(u.shape)
        rise = u < w
        fall = u > 1.0 - w
        mid = ~(rise | fall)
        out[rise] = M * w * s5_int(np.clip(u[rise] / w, 0.0, 1.0))
        out[mid] = M * w * 0.5 + M * (u[mid] - w)
        uf = u[fall]
        out[fall] = (M * w * 0.5 + M * (1.0 - 2.0 * w)
                     + (uf - (1.0 - w))
                     + (M - 1.0) * w * (0.5 - s5_int(np.clip((1.0 - uf) / w, 0.0, 1.0))))
        return out

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        half = self.delta / 2.0
        u = np.clip(2.0 * x / self.delta - 1.0, 0.0, 1.0)
        mid_val = half * self._P(u)
        return np.where(x <= half, 0.0, np.where(x >= self.delta, x, mid_val))

    def deriv(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        half = self.delta / 2.0
        u = np.clip(2.0 * x / self.delta - 1.0, 0.0, 1.0)
        return np.where(x <= half, 0.0, np.where(x >= self.delta, 1.0, self._p(u)))


def build_rho(delta: float) -> RhoProfile:
    if delta <= 0:
        raise ValueError("delta must be positive")
    return RhoProfile(float(delta))


@dataclass(frozen=True)
class FlattenResult:
    f_check: ScalarField
    sigma: GridMask
    delta_used: float


def flatten(f: ScalarField, delta: float, crit: CriticalSet, tols: Tolerances,
            component: int = 0, margin: int = 3,
            max_nudges: int = 10) -> FlattenResult:
    """Apply rho(f) and return the thickening sigma = {f <= delta/2} in the box.

    Requires f >= 0 near C with minimum 0 on C (shift first).  If the
    level delta/2 fails the regular-value check (some node on the level
    band has |grad f| <= grad_tol), delta is scanned upward in 1% steps
    up to max_nudges tries.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    comp = crit.components[component]
    box = isolating_box(comp, margin)
    if float(np.abs(f.values[comp.cells]).max()) > tols.value_tol:
        raise ValueError("f must vanish on C (shift by the critical value first)")
    if float(f.values[box].min()) < -tols.value_tol:
        raise ValueError("f must be nonnegative on the isolating box")

    mag, valid = gradient_magnitude(f)
    hmax = max(f.spacing)
    d = float(delta)
    for _ in range(max_nudges + 1):
        # nodes within (locally) one cell of the level set f = d/2
        band = box & valid & (np.abs(f.values - d / 2.0)
                              <= mag * hmax + tols.value_tol)
        if not band.any() or float(mag[band].min()) > crit.grad_tol:
            break
        d *= 1.01
    else:
        raise RegularValueError("could not nudge delta/2 onto a regular value")

    rho = build_rho(d)
    f_check = f.with_values(rho(f.values))
    sigma = GridMask(f.dims, f.periodic, (f.values <= d / 2.0) & box & valid)
    return FlattenResult(f_check, sigma, d)


@dataclass(frozen=True)
class FlattenChartResult:
    f_check: ScalarField
    sigma: GridMask
    delta_used: float


def flatten_along_chart(f: ScalarField, delta: float, crit: CriticalSet,
                        chart: SubmanifoldChart, tols: Tolerances,
                        component: int = 0, margin: int = 3,
                        max_nudges: int = 10) -> FlattenChartResult:
    """Flatten the restriction of f to a lower-dimensional chart.

    The restriction f|_S is flattened as in `flatten`; sigma is its
    sublevel set inside the chart slice.  The ambient output extends the
    flattened restriction by the radial weight (1 + r^4) with r the
    distance to the chart, so it agrees with rho(f|_S) on the slice.
    The weight cannot remove fiber criticality over sigma's interior
    (the restricted profile is flat there), so the critical set of the
    extension is the fiber slab over sigma, which carries the same
    homotopy type.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    comp = crit.components[component]
    _require_contained(comp, chart)
    box = isolating_box(comp, margin)
    slice_mask = chart.slice_mask(f.dims)
    if float(np.abs(f.values[comp.cells]).max()) > tols.value_tol:
        raise ValueError("f must vanish on C (shift by the critical value first)")
    if float(f.values[slice_mask & box].min()) < -tols.value_tol:
        raise ValueError("f must be nonnegative on the chart slice near C")

    dims = f.dims
    proj_vals = np.zeros(dims)
    r4 = np.zeros(dims)
    for node in itertools.product(*(range(n) for n in dims)):
        proj_vals[node] = f.values[chart.project(node)]
        r4[node] = chart.distance_to(node, f.spacing, f.periodic, dims) ** 4

    restricted = f.with_values(proj_vals)
    mag, valid = gradient_magnitude(restricted)
    hmax = max(f.spacing)
    d = float(delta)
    for _ in range(max_nudges + 1):
        band = box & valid & slice_mask & (np.abs(proj_vals - d / 2.0)
                                           <= mag * hmax + tols.value_tol)
        if not band.any() or float(mag[band].min()) > crit.grad_tol:
            break
        d *= 1.01
    else:
        raise RegularValueError("could not nudge delta/2 onto a regular value")

    rho = build_rho(d)
    f_check = f.with_values((1.0 + r4) * rho(proj_vals))
    sigma = GridMask(f.dims, f.periodic,
                     (proj_vals <= d / 2.0) & slice_mask & box & stencil_mask(f))
    return FlattenChartResult(f_check, sigma, d)


@dataclass
class ThickeningReport:
    betti_c: Tuple[int, ...]
    betti_sigma: Tuple[int, ...]
    betti_match: bool
    descent_reached_c: bool
    passed: bool
    failures: List[Tuple[int, ...]] = dc_field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "betti_c": list(self.betti_c),
            "betti_sigma": list(self.betti_sigma),
            "betti_match": self.betti_match,
            "descent_reached_c": self.descent_reached_c,
            "passed": self.passed,
            "failures": [list(n) for n in self.failures],
        }


def _steepest_descent(f: ScalarField, start, box, budget: int):
    node = tuple(start)
    for _ in range(budget):
        best = node
        best_val = f.values[node]
        for nb in _neighbors(node, f.dims, f.periodic):
            if f.values[nb] < best_val:
                best, best_val = nb, f.values[nb]
        if best == node:
            return node
        if not box[best]:
            raise DescentEscapeError(f"descent from {tuple(start)} left the box")
        node = best
    return node


def verify_thickening(f: ScalarField, crit: CriticalSet, sigma: GridMask,
                      tols: Tolerances, component: int = 0, margin: int = 3,
                      step_budget: Optional[int] = None) -> ThickeningReport:
    """Betti equality of C and sigma, plus descent from sigma back into C."""
    comp = crit.components[component]
    if not (comp.cells <= sigma.cells).all():
        raise ValueError("C must be contained in sigma")
    box = isolating_box(comp, margin)
    b_c = betti_of_mask(comp)
    b_s = betti_of_mask(sigma)
    betti_match = b_c == b_s

    budget = step_budget or 4 * sum(f.dims)
    failures = []
    for node in map(tuple, np.argwhere(sigma.cells)):
        end = _steepest_descent(f, node, box, budget)
        if not comp.cells[end]:
            failures.append(node)
    descent_ok = not failures
    return ThickeningReport(b_c, b_s, betti_match, descent_ok,
                            betti_match and descent_ok, failures)


# -- classification ladder ---------------------------------------------------


def _component_extent_axes(comp: GridMask) -> Tuple[int, ...]:
    nodes = np.argwhere(comp.cells)
    axes = []
    for a in range(len(comp.dims)):
        if len(np.unique(nodes[:, a])) > 1:
            axes.append(a)
    return tuple(axes)


def classify(f: ScalarField, crit: CriticalSet, chart: Optional[SubmanifoldChart] = None,
             tau: Optional[ScalarField] = None, tols: Tolerances = Tolerances(),
             strict: bool = False, component: int = 0,
             margin: int = 3) -> DegeneracyReport:
    """Run the degeneracy ladder and report the finest classification."""
    comp = crit.components[component]
    nodes = _sample_nodes(f, comp)
    report = DegeneracyReport("unclassified")

    is_singleton = comp.count() == 1
    morse_ok = bool(nodes) and is_singleton
    bott_axes = _component_extent_axes(comp)
    f_on_c = f.values[comp.cells]
    bott_ok = (bool(nodes)
               and float(f_on_c.max() - f_on_c.min()) <= tols.value_tol)
    spectra = []
    floor = tols.floor_for(f)
    for node in nodes:
        w, V = eig_sym(hessian_at(f, node))
        spectra.append([float(x) for x in w])
        thresh = _kernel_threshold(w, tols.eig_tol, floor)
        kernel_idx = np.nonzero(np.abs(w) < thresh)[0]
        if len(kernel_idx) != 0:
            morse_ok = False
        if len(kernel_idx) != len(bott_axes):
            bott_ok = False
        elif bott_axes and _principal_alignment(V[:, kernel_idx], bott_axes,
                                                f.ndim) > tols.angle_tol:
            bott_ok = False
    report.hessian_spectra = spectra
    report.sampled_nodes = nodes
    report.details["morse"] = morse_ok
    report.details["morse_bott"] = bott_ok

    flat_ok = mindeg_ok = qmd_ok = False
    if chart is not None:
        try:
            flat = check_flattened_degenerate(f, crit, chart, tols, strict,
                                              component, margin)
            flat_ok = flat.passed
        except ChartError:
            flat_ok = False
        try:
            mindeg = check_minimally_degenerate(f, crit, chart, tols, strict,
                                                component, margin)
            mindeg_ok = mindeg.passed
            report.negative_index = mindeg.negative_index
        except ChartError:
            mindeg_ok = False
        if tau is not None:
            try:
                qmd_ok = check_qmd(f, tau, crit, chart, tols, strict,
                                   component, margin).passed
            except (ChartError, TauError):
                qmd_ok = False
    report.details["flattened_degenerate"] = flat_ok
    report.details["minimally_degenerate"] = mindeg_ok
    report.details["qmd"] = qmd_ok

    for label, ok in (("morse", morse_ok), ("morse_bott", bott_ok),
                      ("flattened_degenerate", flat_ok),
                      ("minimally_degenerate", mindeg_ok), ("qmd", qmd_ok)):
        if ok:
            report.classification = label
            break
    return report
