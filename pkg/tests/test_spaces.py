"""Spaces: operator application, adjoint identity, pairing, norms."""

import math

import numpy as np
import pytest

from cone_kkt import LinearMap, SpaceSpec, Vector, adjoint_apply, apply, norm, pairing
from cone_kkt.errors import DimensionMismatchError


def test_apply_identity():
    A = LinearMap(np.eye(2))
    assert np.array_equal(apply(A, [3.0, -1.0]), [3.0, -1.0])


def test_apply_direct_arithmetic():
    A = LinearMap([[1, 0, 0], [0, 1, -1]])
    assert np.array_equal(apply(A, [0.0, 0.0, 5.0]), [0.0, -5.0])


def test_apply_zero_map():
    A = LinearMap(np.zeros((3, 2)))
    assert np.array_equal(apply(A, [7.0, -2.0]), np.zeros(3))


def test_apply_dimension_mismatch_reports_both_dims():
    A = LinearMap(np.eye(2))
    with pytest.raises(DimensionMismatchError) as info:
        apply(A, [1.0, 2.0, 3.0])
    assert info.value.expected == 2
    assert info.value.got == 3


def test_adjoint_identity_cases():
    assert np.array_equal(adjoint_apply(LinearMap(np.eye(2)), [1.0, 0.0]), [1.0, 0.0])
    A = LinearMap([[1, 0, 0], [0, 1, -1]])
    assert np.array_equal(adjoint_apply(A, [0.0, 1.0]), [0.0, 1.0, -1.0])
    with pytest.raises(DimensionMismatchError):
        adjoint_apply(A, [1.0, 2.0, 3.0])


def test_adjoint_pairing_identity_200_triples():
    rng = np.random.default_rng(7)
    for _ in range(200):
        m, n = rng.integers(1, 9, size=2)
        A = LinearMap(rng.standard_normal((m, n)))
        x = rng.standard_normal(n)
        z = rng.standard_normal(m)
        lhs = pairing(z, apply(A, x))
        rhs = pairing(adjoint_apply(A, z), x)
        assert abs(lhs - rhs) <= 1e-12 * (1.0 + abs(lhs))


def test_pairing_values():
    assert pairing([1.0, 0.0], [0.5, 2.0]) == 0.5
    assert pairing([0.0, 0.0], [3.0, -1.0]) == 0.0
    assert pairing([1.0, 1.0, -1.0], [2.0, 3.0, 4.0]) == 1.0
    with pytest.raises(DimensionMismatchError):
        pairing([1.0], [1.0, 2.0])


def test_norm_values():
    assert norm([3.0, 4.0], 2) == 5.0
    assert norm([3.0, -4.0], math.inf) == 4.0
    assert norm([0.0, 0.0, 0.0], 2) == 0.0
    with pytest.raises(ValueError):
        norm([1.0], 0.5)


def test_norm_homogeneity_and_triangle():
    rng = np.random.default_rng(11)
    for _ in range(200):
        n = int(rng.integers(1, 8))
        p = float(rng.choice([1.0, 1.5, 2.0, 3.0, math.inf]))
        u = rng.standard_normal(n)
        v = rng.standard_normal(n)
        a = float(rng.standard_normal())
        assert abs(norm(a * u, p) - abs(a) * norm(u, p)) <= 1e-12 * (1 + norm(u, p))
        assert norm(u + v, p) <= norm(u, p) + norm(v, p) + 1e-12


def test_apply_is_linear():
    rng = np.random.default_rng(3)
    for _ in range(100):
        m, n = rng.integers(1, 8, size=2)
        A = LinearMap(rng.standard_normal((m, n)))
        x, y = rng.standard_normal(n), rng.standard_normal(n)
        a, bcoef = rng.standard_normal(2)
        lhs = apply(A, a * x + bcoef * y)
        rhs = a * apply(A, x) + bcoef * apply(A, y)
        assert np.max(np.abs(lhs - rhs)) <= 1e-12 * (1 + np.max(np.abs(lhs)))


def test_vector_requires_matching_space():
    s = SpaceSpec(2)
    v = Vector(np.array([1.0, 2.0]), s)
    assert v.space.p == 2.0
    with pytest.raises(DimensionMismatchError):
        Vector(np.array([1.0]), s)
    with pytest.raises(ValueError):
        Vector(np.array([1.0, np.nan]), s)
    with pytest.raises(ValueError):
        SpaceSpec(0)
