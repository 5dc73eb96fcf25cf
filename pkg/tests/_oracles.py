"""Independent oracles used by the test suite.

These deliberately avoid the package's own linear algebra: ranks come
from a naive list-of-lists elimination, eigenvalues from bisection on a
Sturm chain of leading principal minors, and homology from the naive
rank.  Random filtered complexes are assembled from elementary pieces
with known homology and scrambled by a filtration-respecting change of
basis.
"""

from __future__ import annotations

import numpy as np

from qmdkit.specseq import FilteredComplex, Generator


def naive_gf2_rank(rows) -> int:
    """Text-book Gaussian elimination over GF(2) on python lists."""
    mat = [list(int(x) % 2 for x in row) for row in rows]
    if not mat:
        return 0
    n_cols = len(mat[0])
    rank = 0
    for col in range(n_cols):
        pivot = None
        for r in range(rank, len(mat)):
            if mat[r][col]:
                pivot = r
                break
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        for r in range(len(mat)):
            if r != rank and mat[r][col]:
                mat[r] = [(a ^ b) for a, b in zip(mat[r], mat[rank])]
        rank += 1
    return rank


def _count_eigs_below(A: np.ndarray, x: float) -> int:
    """Sign changes in the Sturm chain of leading principal minors of A - xI."""
    n = A.shape[0]
    for jitter in (0.0, 1e-12, -1e-12, 1e-11, -1e-11):
        B = A - (x + jitter) * np.eye(n)
        seq = [1.0]
        ok = True
        for k in range(1, n + 1):
            d = float(np.linalg.det(B[:k, :k]))
            if d == 0.0:
                ok = False
                break
            seq.append(d)
        if ok:
            changes = sum(1 for a, b in zip(seq, seq[1:]) if (a > 0) != (b > 0))
            return changes
    raise RuntimeError("could not find a regular shift for the Sturm chain")


def sturm_eigenvalues(A: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """All eigenvalues of a symmetric matrix by bisection on the Sturm chain."""
    A = 0.5 * (A + A.T)
    n = A.shape[0]
    radius = float(np.abs(A).sum(axis=1).max()) + 1.0
    eigs = []
    for k in range(n):
        lo, hi = -radius, radius
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if _count_eigs_below(A, mid) >= k + 1:
                hi = mid
            else:
                lo = mid
        eigs.append(0.5 * (lo + hi))
    return np.array(eigs)


def naive_homology_dims(fc: FilteredComplex) -> dict:
    """GF(2) homology of the total complex via the naive rank oracle."""
    out = {}
    for n in fc.degrees():
        d_n = fc.differential(n).to_dense().tolist()
        d_n1 = fc.differential(n + 1).to_dense().tolist()
        rank_n = naive_gf2_rank(d_n) if fc.dim(n) else 0
        rank_n1 = naive_gf2_rank(d_n1) if fc.dim(n + 1) else 0
        out[n] = fc.dim(n) - rank_n - rank_n1
    return out


def _gf2_inverse(U: np.ndarray) -> np.ndarray:
    n = U.shape[0]
    aug = np.concatenate([U.copy() % 2, np.eye(n, dtype=np.uint8)], axis=1)
    r = 0
    for c in range(n):
        pivot = None
        for i in range(r, n):
            if aug[i, c]:
                pivot = i
                break
        assert pivot is not None, "change of basis must be invertible"
        aug[[r, pivot]] = aug[[pivot, r]]
        for i in range(n):
            if i != r and aug[i, c]:
                aug[i] ^= aug[r]
        r += 1
    return aug[:, n:]


def random_filtered_complex(rng: np.random.Generator, max_gens: int = 40):
    """(complex, expected_homology): elementary pairs plus free generators,
    scrambled by a random filtration-respecting change of basis."""
    r = int(rng.integers(2, 6))
    degrees = list(range(0, 4))
    gens = []          # (degree, filtration)
    pairs = []         # (killer_index, killed_index)
    n_pairs = int(rng.integers(1, max(2, max_gens // 4)))
    for _ in range(n_pairs):
        n = int(rng.integers(1, len(degrees)))
        p_low = int(rng.integers(1, r + 1))
        p_high = int(rng.integers(p_low, r + 1))
        killed = len(gens)
        gens.append((n - 1, p_low))
        killer = len(gens)
        gens.append((n, p_high))
        pairs.append((killer, killed))
    expected = {n: 0 for n in degrees}
    n_free = int(rng.integers(1, max(2, max_gens - len(gens))))
    for _ in range(n_free):
        if len(gens) >= max_gens:
            break
        n = int(rng.integers(0, len(degrees)))
        gens.append((n, int(rng.integers(1, r + 1))))
        expected[n] += 1

    by_degree = {n: [i for i, (d, _) in enumerate(gens) if d == n]
                 for n in degrees}
    diff = {}
    for n in degrees:
        rows, cols = by_degree.get(n - 1, []), by_degree[n]
        D = np.zeros((len(rows), len(cols)), dtype=np.uint8)
        for killer, killed in pairs:
            if gens[killer][0] == n:
                D[rows.index(killed), cols.index(killer)] = 1
        diff[n] = D

    # scramble: e'_j = e_j + (random generators of <= filtration); mixing
    # strictly below j in a filtration-refining order keeps U unitriangular
    U = {}
    for n in degrees:
        idx = by_degree[n]
        m = len(idx)
        order = sorted(range(m), key=lambda i: (gens[idx[i]][1], i))
        pos = {i: k for k, i in enumerate(order)}
        mat = np.eye(m, dtype=np.uint8)
        for j in range(m):
            for i in range(m):
                if pos[i] < pos[j] and rng.random() < 0.3:
                    mat[i, j] = 1
        U[n] = mat
    for n in degrees:
        if diff[n].size:
            diff[n] = (_gf2_inverse(U[n - 1]) @ diff[n] @ U[n]) % 2

    generators = []
    name_of = {}
    for n in degrees:
        for local, i in enumerate(by_degree[n]):
            name = f"g{i}"
            name_of[(n, local)] = name
            generators.append(Generator(name, n, gens[i][1]))
    boundary = {}
    for n in degrees:
        D = diff[n]
        for j in range(D.shape[1]):
            targets = [name_of[(n - 1, i)] for i in range(D.shape[0]) if D[i, j]]
            if targets:
                boundary[name_of[(n, j)]] = targets
    fc = FilteredComplex(generators, boundary)
    fc.validate()
    return fc, {n: d for n, d in expected.items()}
