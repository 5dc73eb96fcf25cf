import numpy as np
import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from qmdkit.gf2 import (GF2Error, GF2Matrix, Subspace, quotient_dim,
                        solve_row_combination, subspace_intersection,
                        subspace_sum)

from _oracles import naive_gf2_rank


def test_rank_identity():
    assert GF2Matrix.identity(2).rank() == 2


def test_rank_equal_rows():
    assert GF2Matrix.from_rows([[1, 1], [1, 1]]).rank() == 1


def test_rank_dependent_third_row():
    # row 3 = row 1 + row 2
    m = GF2Matrix.from_rows([[1, 0, 1], [0, 1, 1], [1, 1, 0]])
    assert m.rank() == 2


def test_kernel_of_identity_is_zero():
    assert GF2Matrix.identity(2).kernel_basis().rows == 0


def test_kernel_of_zero_matrix_is_full():
    assert GF2Matrix.zeros(3, 3).kernel_basis().rows == 3


def test_kernel_solved_by_hand():
    k = GF2Matrix.from_rows([[1, 1, 0], [0, 1, 1]]).kernel_basis()
    assert k.to_dense().tolist() == [[1, 1, 1]]


def test_axes_sum_spans_plane():
    x = Subspace.from_vectors(2, [[1, 0]])
    y = Subspace.from_vectors(2, [[0, 1]])
    assert subspace_sum(x, y).dim == 2


def test_intersection_with_itself():
    s = Subspace.from_vectors(4, [[1, 0, 1, 0], [0, 1, 1, 1]])
    assert subspace_intersection(s, s) == s


def test_quotient_dim_by_diagonal():
    big = Subspace.from_vectors(2, [[1, 0], [0, 1]])
    small = Subspace.from_vectors(2, [[1, 1]])
    assert quotient_dim(big, small) == 1


def test_quotient_requires_containment():
    big = Subspace.from_vectors(3, [[1, 0, 0]])
    small = Subspace.from_vectors(3, [[0, 1, 0]])
    with pytest.raises(GF2Error):
        quotient_dim(big, small)


def test_ambient_mismatch_rejected():
    with pytest.raises(GF2Error):
        subspace_sum(Subspace.zero(2), Subspace.zero(3))


def test_rank_nullity_on_random_matrices():
    rng = np.random.default_rng(int(__import__("os").environ.get("QMD_SEED", "0")))
    for _ in range(120):
        rows = int(rng.integers(1, 41))
        cols = int(rng.integers(1, 41))
        m = GF2Matrix.from_dense(rng.integers(0, 2, size=(rows, cols)))
        assert m.rank() + m.kernel_basis().rows == cols


def test_rank_matches_naive_oracle():
    rng = np.random.default_rng(1)
    for _ in range(100):
        rows = int(rng.integers(1, 17))
        cols = int(rng.integers(1, 17))
        dense = rng.integers(0, 2, size=(rows, cols))
        assert GF2Matrix.from_dense(dense).rank() == naive_gf2_rank(dense.tolist())


def test_dimension_formula_on_random_subspaces():
    rng = np.random.default_rng(2)
    for _ in range(100):
        n = int(rng.integers(1, 20))
        a = Subspace.from_vectors(n, rng.integers(0, 2, size=(rng.integers(0, n + 1), n)))
        b = Subspace.from_vectors(n, rng.integers(0, 2, size=(rng.integers(0, n + 1), n)))
        lhs = subspace_sum(a, b).dim + subspace_intersection(a, b).dim
        assert lhs == a.dim + b.dim


def test_kernel_vectors_annihilated():
    rng = np.random.default_rng(3)
    for _ in range(50):
        m = GF2Matrix.from_dense(rng.integers(0, 2, size=(8, 11)))
        k = m.kernel_basis()
        for i in range(k.rows):
            assert not m.mul_vector(k.to_dense()[i]).any()


def test_solve_row_combination_roundtrip():
    rng = np.random.default_rng(4)
    for _ in range(50):
        mat = GF2Matrix.from_dense(rng.integers(0, 2, size=(6, 9)))
        coeff = rng.integers(0, 2, size=6).astype(np.uint8)
        target = np.zeros(9, dtype=np.uint8)
        dense = mat.to_dense()
        for i in np.nonzero(coeff)[0]:
            target ^= dense[i]
        solved = solve_row_combination(mat, target)
        assert solved is not None
        recon = np.zeros(9, dtype=np.uint8)
        for i in np.nonzero(solved)[0]:
            recon ^= dense[i]
        assert np.array_equal(recon, target)


def test_mul_matches_dense_product():
    rng = np.random.default_rng(5)
    a = GF2Matrix.from_dense(rng.integers(0, 2, size=(7, 5)))
    b = GF2Matrix.from_dense(rng.integers(0, 2, size=(5, 9)))
    expect = (a.to_dense().astype(int) @ b.to_dense().astype(int)) % 2
    assert np.array_equal(a.mul(b).to_dense(), expect.astype(np.uint8))


@given(st.integers(1, 12), st.integers(1, 12), st.integers(0, 2 ** 32 - 1))
@settings(max_examples=60, deadline=None)
def test_rank_bounded_by_shape(rows, cols, seed):
    rng = np.random.default_rng(seed)
    m = GF2Matrix.from_dense(rng.integers(0, 2, size=(rows, cols)))
    assert 0 <= m.rank() <= min(rows, cols)


@given(st.integers(1, 10), st.integers(0, 2 ** 32 - 1))
@settings(max_examples=40, deadline=None)
def test_rref_is_idempotent(n, seed):
    rng = np.random.default_rng(seed)
    m = GF2Matrix.from_dense(rng.integers(0, 2, size=(n, n)))
    r1, piv1 = m.rref()
    r2, piv2 = r1.rref()
    assert r1 == r2 and piv1 == piv2
