"""Spectral sequences of filtered chain complexes over GF(2).

A FilteredComplex is a finite chain complex whose basis elements carry a
homological degree and a filtration level p in 1..r, with the differential
preserving the filtration (the boundary of a level-p generator lies in the
span of levels <= p).  Pages are computed by the cycle/boundary formula

    Z^k_{p,q} = {x in F_p C_{p+q} : dx in F_{p-k}}
    E^k_{p,q} = Z^k_{p,q} / (Z^{k-1}_{p-1,q+1} + d Z^{k-1}_{p+k-1,q-k+2})

with the page-k differential induced by d, of bidegree (-k, k-1).  Finite
complexes stabilize no later than page r+1; the stable page's total
dimensions recover the homology of the underlying complex.

Descriptors bundle local data per critical piece: an action value (which
orders the filtration), an integer grading offset iota, and a local
complex (or just its Betti numbers).  The assembled total complex puts
piece p's degree-m homology in total degree m + iota_p, so its first page
realizes the local-homology dimensions directly.  Action-cutoff
truncations form a directed system whose first pages agree on every
common bidegree, verified by the directed-limit check.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .gf2 import GF2Matrix, Subspace, quotient_dim, solve_row_combination, subspace_sum


class FiltrationError(ValueError):
    pass


class BoundaryError(ValueError):
    pass


class CrossTermError(ValueError):
    pass


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int
    filtration: int

    def __post_init__(self):
        if self.filtration < 1:
            raise FiltrationError(f"generator {self.name}: filtration must be >= 1")


class FilteredComplex:
    """Finite GF(2) chain complex with a filtration adapted to its basis."""

    def __init__(self, generators: Sequence[Generator],
                 boundary: Dict[str, Iterable[str]]):
        self.generators: Tuple[Generator, ...] = tuple(generators)
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise ValueError("generator names must be unique")
        self._gen_by_name = {g.name: g for g in self.generators}
        self._index_in_degree: Dict[str, int] = {}
        self._by_degree: Dict[int, List[Generator]] = {}
        for g in self.generators:
            self._index_in_degree[g.name] = len(self._by_degree.setdefault(g.degree, []))
            self._by_degree[g.degree].append(g)

        self.boundary_names: Dict[str, Tuple[str, ...]] = {}
        self._diff: Dict[int, GF2Matrix] = {}
        for n, gens in self._by_degree.items():
            lower = self._by_degree.get(n - 1, [])
            dense = np.zeros((len(lower), len(gens)), dtype=np.uint8)
            for j, g in enumerate(gens):
                targets = tuple(boundary.get(g.name, ()))
                self.boundary_names[g.name] = targets
                for tname in targets:
                    tgt = self._gen_by_name.get(tname)
                    if tgt is None:
                        raise BoundaryError(f"boundary of {g.name} names unknown "
                                            f"generator {tname}")
                    if tgt.degree != n - 1:
                        raise BoundaryError(f"boundary of {g.name} (degree {n}) hits "
                                            f"{tname} of degree {tgt.degree}")
                    dense[self._index_in_degree[tname], j] ^= 1
            self._diff[n] = GF2Matrix.from_dense(dense) if dense.size else \
                GF2Matrix(len(lower), len(gens))

    # -- structure queries ----------------------------------------------

    def degrees(self) -> List[int]:
        return sorted(self._by_degree)

    def dim(self, n: int) -> int:
        return len(self._by_degree.get(n, []))

    def filtrations(self, n: int) -> List[int]:
        return [g.filtration for g in self._by_degree.get(n, [])]

    def generator_names(self, n: int) -> List[str]:
        return [g.name for g in self._by_degree.get(n, [])]

    def differential(self, n: int) -> GF2Matrix:
        return self._diff.get(n, GF2Matrix(self.dim(n - 1), self.dim(n)))

    @property
    def max_filtration(self) -> int:
        return max((g.filtration for g in self.generators), default=1)

    def is_empty(self) -> bool:
        return not self.generators

    # -- validation -------------------------------------------------------

    def validate(self) -> None:
        """Assert d*d = 0 and that d never raises the filtration level."""
        for g in self.generators:
            for tname in self.boundary_names.get(g.name, ()):
                tgt = self._gen_by_name[tname]
                if tgt.filtration > g.filtration:
                    raise FiltrationError(
                        f"differential raises filtration: {g.name} (p={g.filtration}) "
                        f"-> {tname} (p={tgt.filtration})")
        for n in self.degrees():
            lower = self.differential(n)
            lower2 = self.differential(n - 1)
            if lower.rows and lower2.rows:
                if not lower2.mul(lower).is_zero():
                    raise BoundaryError(f"d^2 != 0 out of degree {n}")

    # -- homology oracle ---------------------------------------------------

    def homology_dims(self) -> Dict[int, int]:
        """Direct GF(2) homology of the unfiltered total complex."""
        out = {}
        for n in self.degrees():
            d_n = self.differential(n)
            d_n1 = self.differential(n + 1)
            dim_ker = self.dim(n) - d_n.rank()
            out[n] = dim_ker - d_n1.rank()
        return out

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "generators": [{"name": g.name, "degree": g.degree,
                            "filtration": g.filtration} for g in self.generators],
            "boundary": {name: list(t) for name, t in sorted(self.boundary_names.items())
                         if t},
        }

    @classmethod
    def from_json(cls, data: dict) -> "FilteredComplex":
        gens = [Generator(d["name"], int(d["degree"]), int(d.get("filtration", 1)))
                for d in data["generators"]]
        return cls(gens, {k: list(v) for k, v in data.get("boundary", {}).items()})


def validate(fc: FilteredComplex) -> None:
    fc.validate()


# -- pages -----------------------------------------------------------------


@dataclass
class PageEntry:
    dim: int
    representatives: Subspace          # spanned by the chosen class representatives
    cycle_space: Subspace
    boundary_space: Subspace
    rep_vectors: List[np.ndarray] = dc_field(default_factory=list)


@dataclass
class Page:
    k: int
    entries: Dict[Tuple[int, int], PageEntry]
    differentials: Dict[Tuple[int, int], GF2Matrix]

    def dims(self) -> Dict[Tuple[int, int], int]:
        return {pq: e.dim for pq, e in self.entries.items() if e.dim}

    def dim_at(self, p: int, q: int) -> int:
        e = self.entries.get((p, q))
        return e.dim if e else 0

    def total_dims(self) -> Dict[int, int]:
        out: Dict[int, int] = {}
        for (p, q), e in self.entries.items():
            if e.dim:
                out[p + q] = out.get(p + q, 0) + e.dim
        return out

    def to_json(self) -> dict:
        return {
            "page": self.k,
            "entries": [{"p": p, "q": q, "dim": d}
                        for (p, q), d in sorted(self.dims().items())],
        }


def _z_space(fc: FilteredComplex, p: int, k: int, n: int,
             cache: Dict[Tuple[int, int, int], Subspace]) -> Subspace:
    """Z^k at filtration p in total degree n (as a subspace of C_n)."""
    key = (p, k, n)
    if key in cache:
        return cache[key]
    dim_n = fc.dim(n)
    if dim_n == 0:
        sp = Subspace.zero(0)
        cache[key] = sp
        return sp
    filt_n = fc.filtrations(n)
    cols = [i for i in range(dim_n) if filt_n[i] <= p]
    if not cols:
        sp = Subspace.zero(dim_n)
        cache[key] = sp
        return sp
    d = fc.differential(n)
    filt_low = fc.filtrations(n - 1)
    bad_rows = [j for j in range(fc.dim(n - 1)) if filt_low[j] > p - k]
    if not bad_rows or d.rows == 0:
        vectors = []
        for c in cols:
            v = np.zeros(dim_n, dtype=np.uint8)
            v[c] = 1
            vectors.append(v)
        sp = Subspace.from_vectors(dim_n, vectors)
        cache[key] = sp
        return sp
    sub = d.submatrix(row_idx=bad_rows, col_idx=cols)
    kern = sub.kernel_basis().to_dense()
    vectors = []
    for row in kern:
        v = np.zeros(dim_n, dtype=np.uint8)
        v[cols] = row
        vectors.append(v)
    sp = Subspace.from_vectors(dim_n, vectors)
    cache[key] = sp
    return sp


def _apply_d(fc: FilteredComplex, n: int, vectors: Iterable[np.ndarray]) -> List[np.ndarray]:
    d = fc.differential(n)
    return [d.mul_vector(v) for v in vectors]


def _complement_reps(numerator: Subspace, denominator: Subspace) -> List[np.ndarray]:
    """Representatives of numerator/denominator, deterministic in basis order."""
    reps = []
    acc = denominator
    for i in range(numerator.basis.rows):
        v = numerator.basis.to_dense()[i]
        if not acc.contains_vector(v):
            reps.append(v)
            acc = subspace_sum(acc, Subspace.from_vectors(len(v), [v]))
    return reps


def page(fc: FilteredComplex, k: int) -> Page:
    """Page E^k with its induced differential of bidegree (-k, k-1)."""
    if k < 1:
        raise ValueError("pages are defined for k >= 1")
    r = fc.max_filtration
    cache: Dict[Tuple[int, int, int], Subspace] = {}
    entries: Dict[Tuple[int, int], PageEntry] = {}
    if fc.is_empty():
        return Page(k, {}, {})
    for n in fc.degrees():
        dim_n = fc.dim(n)
        if dim_n == 0:
            continue
        for p in range(1, r + 1):
            q = n - p
            Z = _z_space(fc, p, k, n, cache)
            Zm = _z_space(fc, p - 1, k - 1, n, cache)
            Bsrc = _z_space(fc, p + k - 1, k - 1, n + 1, cache)
            bvecs = _apply_d(fc, n + 1, [Bsrc.basis.to_dense()[i]
                                         for i in range(Bsrc.dim)]) if fc.dim(n + 1) else []
            B = Subspace.from_vectors(dim_n, bvecs)
            W = subspace_sum(Zm, B)
            if not Z.contains(W):
                # always holds for a valid filtered complex
                raise AssertionError("cycle/boundary containment violated")
            dim_e = quotient_dim(Z, W)
            reps = _complement_reps(Z, W)
            entries[(p, q)] = PageEntry(dim_e, Subspace.from_vectors(dim_n, reps),
                                        Z, W, reps)

    differentials: Dict[Tuple[int, int], GF2Matrix] = {}
    for (p, q), entry in entries.items():
        tgt = entries.get((p - k, q + k - 1))
        n = p + q
        src_dim = entry.dim
        tgt_dim = tgt.dim if tgt else 0
        dense = np.zeros((tgt_dim, src_dim), dtype=np.uint8)
        if src_dim and tgt_dim:
            basis_rows = [tgt.boundary_space.basis.to_dense()[i]
                          for i in range(tgt.boundary_space.dim)]
            basis_rows += list(tgt.rep_vectors)
            mat = GF2Matrix.from_rows(basis_rows, cols=fc.dim(n - 1)) if basis_rows \
                else GF2Matrix(0, fc.dim(n - 1))
            for j, x in enumerate(entry.rep_vectors):
                y = fc.differential(n).mul_vector(x)
                if not tgt.cycle_space.contains_vector(y):
                    raise AssertionError("page differential violates its bidegree")
                coeff = solve_row_combination(mat, y)
                if coeff is None:
                    raise AssertionError("page differential failed to reduce")
                dense[:, j] = coeff[tgt.boundary_space.dim:]
        elif src_dim and tgt is not None:
            # target entry vanishes: the class of d(x) must already be zero
            for x in entry.rep_vectors:
                y = fc.differential(n).mul_vector(x)
                if not tgt.boundary_space.contains_vector(y):
                    raise AssertionError("nonzero differential into an empty entry")
        differentials[(p, q)] = GF2Matrix.from_dense(dense) if dense.size \
            else GF2Matrix(tgt_dim, src_dim)

    _assert_d_squared_zero(entries, differentials, k)
    return Page(k, entries, differentials)


def _assert_d_squared_zero(entries, differentials, k: int) -> None:
    for (p, q), d1 in differentials.items():
        up = differentials.get((p + k, q - k + 1))
        if up is not None and d1.cols and up.rows:
            if d1.rows and not d1.mul(up).is_zero():
                raise AssertionError(f"d_{k} squared is nonzero at {(p, q)}")


def page_dims_via_differential(pg: Page) -> Dict[Tuple[int, int], int]:
    """E^{k+1} dimensions predicted from page k's differential (kernel/image).

    Independent of the direct cycle/boundary formula; used to cross-check it.
    """
    out: Dict[Tuple[int, int], int] = {}
    k = pg.k
    for (p, q), entry in pg.entries.items():
        d_out = pg.differentials.get((p, q))
        rank_out = d_out.rank() if d_out is not None else 0
        d_in = pg.differentials.get((p + k, q - k + 1))
        rank_in = d_in.rank() if d_in is not None else 0
        dim_next = entry.dim - rank_out - rank_in
        if dim_next:
            out[(p, q)] = dim_next
    return out


def converge(fc: FilteredComplex) -> Tuple[int, Page]:
    """Smallest k with E^k = E^{k+1} = ... and the stable page.

    Differentials of bidegree (-k, k-1) vanish identically once k exceeds
    the filtration width, so page r+1 is already E-infinity for a complex
    with r levels.
    """
    if fc.is_empty():
        return 1, Page(1, {}, {})
    r = fc.max_filtration
    pages = {k: page(fc, k) for k in range(1, r + 2)}
    final = pages[r + 1]
    final_dims = final.dims()
    stable = r + 1
    for k in range(1, r + 2):
        if pages[k].dims() == final_dims:
            stable = k
            break
    return stable, final


# -- descriptors -------------------------------------------------------------


@dataclass(frozen=True)
class QMDPiece:
    name: str
    action: float
    iota: int
    betti: Optional[Tuple[int, ...]] = None
    local_complex: Optional[dict] = None

    def __post_init__(self):
        if (self.betti is None) == (self.local_complex is None):
            raise ValueError(f"piece {self.name}: provide exactly one of betti "
                             f"or local_complex")
        if self.betti is not None:
            object.__setattr__(self, "betti", tuple(int(b) for b in self.betti))


@dataclass(frozen=True)
class QMDDescriptor:
    pieces: Tuple[QMDPiece, ...]
    cross_terms: Tuple[Tuple[str, str], ...] = ()

    def to_json(self) -> dict:
        out = {"pieces": [], "cross_terms": [{"from": a, "to": b}
                                             for a, b in self.cross_terms]}
        for piece in self.pieces:
            entry = {"name": piece.name, "action": piece.action, "iota": piece.iota}
            if piece.betti is not None:
                entry["betti"] = list(piece.betti)
            else:
                entry["complex"] = piece.local_complex
            out["pieces"].append(entry)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "QMDDescriptor":
        pieces = []
        for entry in data["pieces"]:
            pieces.append(QMDPiece(
                name=str(entry["name"]),
                action=float(entry["action"]),
                iota=int(entry["iota"]),
                betti=tuple(entry["betti"]) if "betti" in entry else None,
                local_complex=entry.get("complex"),
            ))
        cross = tuple((str(c["from"]), str(c["to"]))
                      for c in data.get("cross_terms", ()))
        return cls(tuple(pieces), cross)


def _piece_generators(piece: QMDPiece, p: int):
    """(name, total degree) pairs plus local boundary, shifted by iota."""
    gens: List[Tuple[str, int]] = []
    boundary: Dict[str, List[str]] = {}
    if piece.betti is not None:
        for m, b in enumerate(piece.betti):
            for i in range(b):
                gens.append((f"{piece.name}/h{m}.{i}", m + piece.iota))
    else:
        frag = piece.local_complex
        rename = {g["name"]: f"{piece.name}/{g['name']}" for g in frag["generators"]}
        for g in frag["generators"]:
            gens.append((rename[g["name"]], int(g["degree"]) + piece.iota))
        for src, targets in frag.get("boundary", {}).items():
            boundary[rename[src]] = [rename[t] for t in targets]
    return gens, boundary


def build_from_qmd(descriptor: QMDDescriptor) -> FilteredComplex:
    """Assemble the filtered total complex of a descriptor.

    Pieces are sorted by action (stable, so ties keep input order and get
    distinct consecutive levels); piece p's local degree-m generators sit
    in total degree m + iota_p at filtration p.  Cross terms become
    off-block differential entries and must point to strictly
    lower-action pieces, dropping total degree by exactly one.
    """
    order = sorted(range(len(descriptor.pieces)),
                   key=lambda i: descriptor.pieces[i].action)
    generators: List[Generator] = []
    boundary: Dict[str, List[str]] = {}
    owner: Dict[str, QMDPiece] = {}
    for p, i in enumerate(order, start=1):
        piece = descriptor.pieces[i]
        gens, local_boundary = _piece_generators(piece, p)
        for name, degree in gens:
            generators.append(Generator(name, degree, p))
            owner[name] = piece
        for src, targets in local_boundary.items():
            boundary.setdefault(src, []).extend(targets)
    gen_degree = {g.name: g.degree for g in generators}
    for src, dst in descriptor.cross_terms:
        if src not in owner or dst not in owner:
            raise CrossTermError(f"cross term {src} -> {dst} names unknown generators")
        if owner[dst].action >= owner[src].action:
            raise CrossTermError(f"cross term {src} -> {dst} does not decrease action")
        if gen_degree[dst] != gen_degree[src] - 1:
            raise CrossTermError(f"cross term {src} -> {dst} must drop degree by 1")
        boundary.setdefault(src, []).append(dst)
    fc = FilteredComplex(generators, boundary)
    fc.validate()
    return fc


def truncate_by_action(descriptor: QMDDescriptor, cutoff: float) -> QMDDescriptor:
    """Keep pieces with action < cutoff and cross terms among them."""
    kept = tuple(p for p in descriptor.pieces if p.action < cutoff)
    names = set()
    for p in kept:
        gens, _ = _piece_generators(p, 1)
        names.update(name for name, _ in gens)
    cross = tuple((a, b) for a, b in descriptor.cross_terms
                  if a in names and b in names)
    return QMDDescriptor(kept, cross)


def directed_limit_check(descriptor: QMDDescriptor,
                         cutoffs: Sequence[float]) -> bool:
    """First-page entries present at one cutoff agree at every larger cutoff."""
    cutoffs = list(cutoffs)
    if any(b < a for a, b in zip(cutoffs, cutoffs[1:])):
        raise ValueError("cutoffs must be nondecreasing")
    dims_per_cutoff = []
    for cut in cutoffs:
        trunc = truncate_by_action(descriptor, cut)
        if not trunc.pieces:
            dims_per_cutoff.append({})
            continue
        dims_per_cutoff.append(page(build_from_qmd(trunc), 1).dims())
    for i, small in enumerate(dims_per_cutoff):
        for big in dims_per_cutoff[i + 1:]:
            for pq, dim in small.items():
                if big.get(pq, 0) != dim:
                    return False
    return True
