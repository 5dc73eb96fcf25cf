import numpy as np
import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from qmdkit.cubical import (EmptyMaskError, GridMask, betti, betti_of_mask,
                            betti_product_check, build_complex,
                            validate_boundary)


def test_single_square_cell_counts():
    cx = build_complex(GridMask.full((1, 1), (False, False)))
    assert [cx.n_cells(k) for k in range(3)] == [4, 4, 1]


def test_periodic_line_is_a_circle():
    n = 8
    cx = build_complex(GridMask.full((n,), (True,)))
    assert cx.n_cells(0) == n and cx.n_cells(1) == n
    assert betti(cx) == (1, 1)


def test_annulus_euler_characteristic_zero():
    cx = build_complex(GridMask.full((8, 3), (True, False)))
    # V = 8*4, E = 8*4 + 8*3, F = 8*3
    assert (cx.n_cells(0), cx.n_cells(1), cx.n_cells(2)) == (32, 56, 24)
    assert cx.euler_characteristic() == 0


def test_point_betti():
    assert betti_of_mask(GridMask.full((1,), (False,))) == (1, 0)


def test_circle_betti():
    assert betti_of_mask(GridMask.full((12,), (True,))) == (1, 1)


def test_annulus_betti():
    assert betti_of_mask(GridMask.full((8, 3), (True, False))) == (1, 1, 0)


def test_torus_betti():
    assert betti_of_mask(GridMask.full((5, 7), (True, True))) == (1, 2, 1)


def test_degenerate_one_cell_torus():
    assert betti_of_mask(GridMask.full((1, 1), (True, True))) == (1, 2, 1)


def test_empty_mask_rejected():
    with pytest.raises(EmptyMaskError):
        build_complex(GridMask((2, 2), (False, False), np.zeros((2, 2), bool)))


def test_kunneth_convolution_rules():
    assert betti_product_check((1, 1), (1, 1)) == (1, 2, 1)
    assert betti_product_check((1,), (1, 4, 2)) == (1, 4, 2)
    assert betti_product_check((1, 2, 1), (1, 1)) == (1, 3, 3, 1)


def test_product_mask_realizes_kunneth():
    circle = GridMask.full((6,), (True,))
    interval = GridMask.full((4,), (False,))
    annulus = circle.product(interval)
    assert betti_of_mask(annulus) == (1, 1, 0)
    torus = circle.product(GridMask.full((5,), (True,)))
    assert betti_of_mask(torus) == (1, 2, 1)
    expected = betti_product_check(betti_of_mask(circle), betti_of_mask(interval))
    assert betti_of_mask(annulus) == expected


def test_betti_invariant_under_refinement():
    masks = [GridMask.full((6,), (True,)),
             GridMask.full((4, 3), (True, False)),
             GridMask.full((3, 3), (True, True))]
    cells = np.ones((5, 5), bool)
    cells[2, 2] = False
    masks.append(GridMask((5, 5), (False, False), cells))
    for mask in masks:
        assert betti_of_mask(mask.refine(2)) == betti_of_mask(mask)


def test_euler_characteristic_equals_alternating_betti():
    cells = np.ones((6, 6), bool)
    cells[2:4, 2:4] = False
    cx = build_complex(GridMask((6, 6), (False, False), cells))
    b = betti(cx)
    assert cx.euler_characteristic() == sum((-1) ** k * v for k, v in enumerate(b))


def test_mask_json_roundtrip():
    cells = np.zeros((3, 4), bool)
    cells[1, 2] = cells[0, 0] = True
    mask = GridMask((3, 4), (True, False), cells)
    assert GridMask.from_json(mask.to_json()) == mask


@given(st.integers(1, 4), st.integers(1, 4), st.booleans(), st.booleans(),
       st.integers(0, 2 ** 32 - 1))
@settings(max_examples=50, deadline=None)
def test_boundary_squares_to_zero(n0, n1, p0, p1, seed):
    rng = np.random.default_rng(seed)
    cells = rng.random((n0, n1)) < 0.6
    if not cells.any():
        cells[0, 0] = True
    cx = build_complex(GridMask((n0, n1), (p0, p1), cells))
    validate_boundary(cx)


@given(st.integers(2, 5), st.integers(0, 2 ** 32 - 1))
@settings(max_examples=30, deadline=None)
def test_components_of_scattered_cells_add_up(n, seed):
    rng = np.random.default_rng(seed)
    cells = rng.random((n, n)) < 0.5
    if not cells.any():
        cells[0, 0] = True
    b = betti_of_mask(GridMask((n, n), (False, False), cells))
    assert b[0] >= 1
    cx = build_complex(GridMask((n, n), (False, False), cells))
    assert cx.euler_characteristic() == sum((-1) ** k * v for k, v in enumerate(b))
