import math
import os
from fractions import Fraction

import numpy as np
import pytest

from qmdkit.maslov import (CrossingRecord, LagrangianLinePath,
                           NonRegularCrossingError, PathError, concat,
                           conjugate, crossings, index_shift,
                           intersection_dim, maslov)

SEED = int(os.environ.get("QMD_SEED", "0"))


def _rot(theta):
    return np.array([[math.cos(theta), -math.sin(theta)],
                     [math.sin(theta), math.cos(theta)]])


def random_path(rng, n_seg=4, span=16):
    times = tuple(i / n_seg for i in range(n_seg + 1))
    lift = tuple(int(rng.integers(-span, span + 1)) / 8 for _ in range(n_seg + 1))
    return LagrangianLinePath.from_pi_units(times, lift)


def random_regular_pair(rng, n_seg=4):
    for _ in range(100):
        a = random_path(rng, n_seg)
        b = random_path(rng, n_seg)
        try:
            maslov(a, b)
            return a, b
        except NonRegularCrossingError:
            continue
    raise RuntimeError("could not draw a regular pair")


# -- pinned small cases ------------------------------------------------------


def test_equal_constant_paths_vanish():
    g = LagrangianLinePath.constant(0.3)
    assert maslov(g, g) == 0


def test_quarter_turn_against_horizontal():
    g = LagrangianLinePath.from_pi_units((0.0, 1.0), (0.0, 0.5))
    g2 = LagrangianLinePath.constant(0.0)
    assert maslov(g, g2) == Fraction(1, 2)


def test_half_turn_against_horizontal():
    g = LagrangianLinePath.from_pi_units((0.0, 1.0), (0.0, 1.0))
    g2 = LagrangianLinePath.constant(0.0)
    assert maslov(g, g2) == 1


def test_half_turn_splits_into_quarter_turns():
    a = LagrangianLinePath.from_pi_units((0.0, 1.0), (0.0, 0.5))
    b = LagrangianLinePath.from_pi_units((0.0, 1.0), (0.5, 1.0))
    const = LagrangianLinePath.constant(0.0)
    total = concat(a, b)
    assert maslov(total, concat(const, const)) == 1
    assert maslov(a, const) + maslov(b, const) == 1


def test_concatenation_with_constant_tail():
    g = LagrangianLinePath.from_pi_units((0.0, 1.0), (0.1, 0.7))
    tail = LagrangianLinePath.from_pi_units((0.0, 1.0), (0.7, 0.7))
    g2 = LagrangianLinePath.constant(0.4)
    assert maslov(concat(g, tail), concat(g2, g2)) == maslov(g, g2)


def test_reversal_flips_sign():
    rng = np.random.default_rng(SEED + 1)
    for _ in range(50):
        a, b = random_regular_pair(rng)
        assert maslov(a.reverse(), b.reverse()) == -maslov(a, b)


def test_concat_endpoint_mismatch():
    a = LagrangianLinePath.from_pi_units((0.0, 1.0), (0.0, 0.25))
    b = LagrangianLinePath.from_pi_units((0.0, 1.0), (0.5, 0.75))
    with pytest.raises(PathError):
        concat(a, b)


def test_tangential_crossing_rejected():
    g = LagrangianLinePath.from_pi_units((0.0, 0.5, 1.0), (0.0, 0.0, 0.5))
    g2 = LagrangianLinePath.constant(0.0)
    with pytest.raises(NonRegularCrossingError):
        maslov(g, g2)


def test_crossing_records_have_nonzero_signs():
    g = LagrangianLinePath.from_pi_units((0.0, 1.0), (-0.3, 1.3))
    g2 = LagrangianLinePath.constant(0.25)
    recs = crossings(g, g2)
    assert len(recs) == 2  # levels 0.25 and 1.25 of the difference... lift passes 0 and 1
    assert all(r.sign_in != 0 or r.sign_out != 0 for r in recs)


# -- axioms on random pairs --------------------------------------------------


def test_additivity_under_concatenation():
    rng = np.random.default_rng(SEED + 2)
    done = 0
    while done < 100:
        a, a2 = random_regular_pair(rng)
        b = random_path(rng)
        b2 = random_path(rng)
        # align starts with the first pair's endpoints
        b = LagrangianLinePath.from_pi_units(
            b.times, tuple(u - b.lift[0] + a.lift[-1] for u in b.lift))
        b2 = LagrangianLinePath.from_pi_units(
            b2.times, tuple(u - b2.lift[0] + a2.lift[-1] for u in b2.lift))
        try:
            total = maslov(concat(a, b), concat(a2, b2))
            parts = maslov(a, a2) + maslov(b, b2)
        except NonRegularCrossingError:
            continue
        assert total == parts
        done += 1


def test_endpoint_parity_relation():
    rng = np.random.default_rng(SEED + 3)
    for _ in range(100):
        a, b = random_regular_pair(rng)
        mu = maslov(a, b)
        d0 = intersection_dim(a, b, 0.0)
        d1 = intersection_dim(a, b, 1.0)
        assert (2 * mu - (d0 - d1)) % 2 == 0


def test_constant_intersection_dimension_vanishes():
    rng = np.random.default_rng(SEED + 4)
    for _ in range(100):
        a = random_path(rng)
        offsets = [int(rng.integers(2, 15)) / 16 for _ in a.lift]
        b = LagrangianLinePath.from_pi_units(
            a.times, tuple(u - o for u, o in zip(a.lift, offsets)))
        # difference stays strictly inside (0, 1): never crosses a level
        assert maslov(a, b) == 0
    # identically equal paths, arbitrary representative shift
    g = random_path(np.random.default_rng(SEED + 5))
    shifted = LagrangianLinePath.from_pi_units(g.times,
                                               tuple(u + 2 for u in g.lift))
    assert maslov(g, shifted) == 0


def test_reparameterization_invariance():
    rng = np.random.default_rng(SEED + 6)
    for _ in range(100):
        a, b = random_regular_pair(rng)
        increments = rng.integers(1, 5, size=len(a.times) - 1).astype(float)
        knots = np.concatenate([[0.0], np.cumsum(increments)])
        knots /= knots[-1]
        a2 = a.reparameterize(tuple(knots))
        b2 = b.reparameterize(tuple(knots))
        assert maslov(a2, b2) == maslov(a, b)


def test_constant_conjugation_invariance_rotation():
    g = LagrangianLinePath.from_pi_units((0.0, 1.0), (0.0, 0.5))
    g2 = LagrangianLinePath.constant(0.0)
    m = _rot(math.pi / 4)
    assert maslov(conjugate(g, m), conjugate(g2, m)) == Fraction(1, 2)


def test_constant_conjugation_invariance_shear():
    g = LagrangianLinePath.from_pi_units((0.0, 1.0), (0.0, 0.5))
    g2 = LagrangianLinePath.constant(0.0)
    m = np.array([[1.0, 1.0], [0.0, 1.0]])
    assert maslov(conjugate(g.refine(4), m), conjugate(g2.refine(4), m)) == \
        Fraction(1, 2)


def _fine_enough(path):
    # conjugation tracks lifts faithfully only for slowly turning samples;
    # keep each refined segment under a sixteenth of a turn
    worst = max(abs(b - a) for a, b in zip(path.lift, path.lift[1:]))
    return path.refine(max(1, math.ceil(worst * 16)))


def test_conjugation_invariance_random():
    rng = np.random.default_rng(SEED + 7)
    done = 0
    while done < 100:
        a, b = random_regular_pair(rng, n_seg=3)
        theta = float(rng.uniform(0, math.pi))
        s = float(rng.uniform(-0.8, 0.8))
        m = _rot(theta) @ np.array([[1.0, s], [0.0, 1.0]])
        try:
            before = maslov(a, b)
            after = maslov(conjugate(_fine_enough(a), m),
                           conjugate(_fine_enough(b), m))
        except NonRegularCrossingError:
            continue
        assert before == after
        done += 1


def test_conjugate_requires_unit_determinant():
    g = LagrangianLinePath.constant(0.0)
    with pytest.raises(ValueError):
        conjugate(g, np.array([[2.0, 0.0], [0.0, 1.0]]))


def test_identity_conjugation_is_identity():
    g = LagrangianLinePath.from_pi_units((0.0, 0.5, 1.0), (0.1, 0.4, 0.9))
    h = conjugate(g, np.eye(2))
    assert np.allclose(h.lift, g.lift)


# -- index shift ---------------------------------------------------------------


def test_index_shift_half_and_one():
    assert index_shift(Fraction(1, 2), 1) == 0
    assert index_shift(2, 2) == 1


def test_index_shift_parity_violation():
    with pytest.raises(ValueError):
        index_shift(Fraction(1, 2), 2)


def test_index_shift_integrality_on_coherent_inputs():
    rng = np.random.default_rng(SEED + 8)
    for _ in range(100):
        dim_c = int(rng.integers(0, 6))
        k = int(rng.integers(-6, 7))
        i_c = Fraction(2 * k + dim_c, 2)  # coherent by construction
        out = index_shift(i_c, dim_c)
        assert isinstance(out, int)
        assert Fraction(out) == i_c - Fraction(dim_c, 2)


# -- serialization ---------------------------------------------------------------


def test_path_json_roundtrip():
    g = LagrangianLinePath.from_pi_units((0.0, 0.25, 1.0), (0.1, 0.45, 0.8))
    h = LagrangianLinePath.from_json(g.to_json())
    assert np.allclose(h.lift, g.lift) and h.times == g.times


def test_index_is_exact_rational():
    g = LagrangianLinePath.from_pi_units((0.0, 1.0), (0.0, 0.5))
    idx = maslov(g, LagrangianLinePath.constant(0.0))
    assert isinstance(idx, Fraction) and str(idx) == "1/2"
