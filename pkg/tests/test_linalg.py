import math

import numpy as np
import pytest

# Project
from core.models import NormOrder
from core.linalg import (lp_norm,
                         hadamard,
                         as_matrix,
                         as_vector,
                         dual_norm,
                         sign_vector,
                         apply_projection,
                         residual_functional,
                         matrix_power_sum,
                         norming_functional,
                         projection_operator,
                         matrix_entrywise_norm,)
from core.exceptions import EmptyInput, ZeroVector, NonFiniteValue, DimensionMismatch


@pytest.mark.parametrize(
    "v, p, expected",
    [
        ((6, 8), NormOrder.L1, 14),
        ((6, 8), NormOrder.L2, 10),
        ((0, 0, 0), NormOrder.L1, 0),
        ((-3,), NormOrder.L2, 3),
    ],
)
def test_lp_norm(v, p, expected):
    assert lp_norm(as_vector(v), p) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("p", list(NormOrder))
def test_lp_norm_rejects_non_finite(p):
    with pytest.raises(NonFiniteValue):
        lp_norm(np.array([1.0, math.nan]), p)
    with pytest.raises(NonFiniteValue):
        lp_norm(np.array([math.inf, 0.0]), p)


def test_norm_order_payload():
    assert NormOrder.L1.dual == math.inf
    assert NormOrder.L2.dual == 2
    assert NormOrder.from_p(1) is NormOrder.L1
    assert NormOrder.from_p("2") is NormOrder.L2
    with pytest.raises(ValueError):
        NormOrder.from_p(3)


@pytest.mark.parametrize(
    "v, expected",
    [
        ((3, -2, 0), (1, -1, 0)),
        ((4, 2), (1, 1)),
        ((4, -2), (1, -1)),
    ],
)
def test_sign_vector(v, expected):
    np.testing.assert_array_equal(sign_vector(as_vector(v)), expected)


def test_norming_functional_examples():
    np.testing.assert_allclose(norming_functional(as_vector((6, 8)), NormOrder.L2), (0.6, 0.8))
    np.testing.assert_array_equal(norming_functional(as_vector((4, -2)), NormOrder.L1), (1, -1))
    np.testing.assert_array_equal(norming_functional(as_vector(5), NormOrder.L1), (1,))


def test_norming_functional_of_zero():
    with pytest.raises(ZeroVector):
        norming_functional(as_vector((0, 0)), NormOrder.L2)
    np.testing.assert_array_equal(norming_functional(as_vector((0, 0)), NormOrder.L1), (0, 0))


def test_norming_functional_relations(rng):
    for _ in range(200):
        v = rng.normal(size=int(rng.integers(1, 9)))
        for p in NormOrder:
            phi = norming_functional(v, p)
            assert phi @ v == pytest.approx(lp_norm(v, p), rel=1e-12)
            assert dual_norm(phi, p) == pytest.approx(1.0, rel=1e-12)


def test_homogeneity_and_triangle(rng):
    for _ in range(200):
        n = int(rng.integers(1, 9))
        u, v = rng.normal(size=n), rng.normal(size=n)
        c = rng.normal()
        for p in NormOrder:
            assert lp_norm(c * u, p) == pytest.approx(abs(c) * lp_norm(u, p), rel=1e-12)
            assert lp_norm(u + v, p) <= lp_norm(u, p) + lp_norm(v, p) + 1e-12


def test_hadamard():
    np.testing.assert_array_equal(hadamard((1, 0, 1), (5, 7, 9)), (5, 0, 9))
    np.testing.assert_array_equal(hadamard(np.ones(3), (2, 3, 4)), (2, 3, 4))
    np.testing.assert_allclose(hadamard((2 / 3, 1 / 4), (6, 8)), (4, 2))
    with pytest.raises(DimensionMismatch):
        hadamard((1, 2), (1, 2, 3))


@pytest.mark.parametrize(
    "X, p, expected",
    [
        ([[1, -1], [1, -1]], NormOrder.L1, 4),
        ([[3, 0], [0, 4]], NormOrder.L2, 5),
        ([[0, 0], [0, 0]], NormOrder.L1, 0),
    ],
)
def test_matrix_entrywise_norm(X, p, expected):
    assert matrix_entrywise_norm(as_matrix(X), p) == pytest.approx(expected)


def test_matrix_power_sum():
    X = as_matrix([[3, 0], [0, 4]])
    assert matrix_power_sum(X, NormOrder.L2) == pytest.approx(25)
    assert matrix_power_sum(X, NormOrder.L1) == pytest.approx(7)


@pytest.mark.parametrize(
    "values, error",
    [
        ([], EmptyInput),
        ([1.0, math.nan], NonFiniteValue),
        ([1.0, math.inf], NonFiniteValue),
        ([[1.0, 2.0]], DimensionMismatch),
    ],
)
def test_as_vector_rejects(values, error):
    with pytest.raises(error):
        as_vector(values)


def test_as_matrix_rejects():
    with pytest.raises(DimensionMismatch):
        as_matrix([1.0, 2.0])
    with pytest.raises(EmptyInput):
        as_matrix(np.zeros((0, 3)))
    with pytest.raises(NonFiniteValue):
        as_matrix([[1.0, -math.inf]])


def test_validated_arrays_are_read_only():
    v = as_vector([1.0, 2.0])
    with pytest.raises(ValueError):
        v[0] = 5.0


def test_projection_operator_is_idempotent(rng):
    for _ in range(100):
        n = int(rng.integers(2, 8))
        x, y = rng.normal(size=n), rng.normal(size=n)
        for p in NormOrder:
            Q = projection_operator(x, p)
            np.testing.assert_allclose(Q @ Q, Q, atol=1e-12)
            np.testing.assert_allclose(Q @ y, apply_projection(x, y, p), atol=1e-12)
            fitted = apply_projection(x, y, p)
            np.testing.assert_allclose(apply_projection(x, fitted, p), fitted, atol=1e-12)


def test_projection_onto_zero():
    with pytest.raises(ZeroVector):
        projection_operator(np.zeros(3), NormOrder.L1)
    with pytest.raises(ZeroVector):
        apply_projection(np.zeros(3), np.ones(3), NormOrder.L2)


def test_residual_functional_vanishes_on_random_pairs(rng):
    for p in NormOrder:
        for _ in range(1000):
            n = int(rng.integers(2, 11))
            x, y = rng.normal(size=n), rng.normal(scale=3.0, size=n)
            assert abs(residual_functional(x, y, p)) <= 1e-9 * lp_norm(y, p)
