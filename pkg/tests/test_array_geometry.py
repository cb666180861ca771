import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from losmimo.array_geometry import (
    ArrayGeometry, Axis, Direction, array_factor, direction_cosine, steering_vector,
)
from losmimo.errors import ArgumentError, DomainError


def test_direction_cosine_y_and_z():
    y = ArrayGeometry(4, axis=Axis.Y)
    z = ArrayGeometry(4, axis=Axis.Z)
    assert direction_cosine(y, Direction(math.pi / 2, math.pi / 2)) == pytest.approx(1.0)
    assert direction_cosine(y, Direction(0.0, 1.234)) == 0.0
    assert direction_cosine(z, Direction(math.pi / 3)) == pytest.approx(0.5)


def test_steering_vector_examples():
    np.testing.assert_allclose(steering_vector(ArrayGeometry(4), 0.0), np.ones(4))
    np.testing.assert_allclose(steering_vector(ArrayGeometry(2), 1.0), [1, -1], atol=1e-15)
    np.testing.assert_allclose(steering_vector(ArrayGeometry(3), 0.5), [1, 1j, -1], atol=1e-15)


@pytest.mark.parametrize("psi", [1.0000001, -2.0, math.nan])
def test_steering_vector_domain(psi):
    with pytest.raises(DomainError):
        steering_vector(ArrayGeometry(3), psi)


@given(st.integers(1, 32), st.floats(-1, 1), st.floats(0.01, 10))
def test_steering_vector_unit_modulus(n, psi, kd):
    a = steering_vector(ArrayGeometry(n, kd), psi)
    assert a.shape == (n,)
    np.testing.assert_allclose(np.abs(a), 1.0, rtol=1e-12)
    assert a[0] == 1


def test_array_factor_examples():
    up = Direction(math.pi / 2, 0.0)              # psi = 0 on the y axis
    assert array_factor(ArrayGeometry(8), np.ones(8), up) == pytest.approx(8 + 0j)
    endfire = Direction(math.pi / 2, math.pi / 2)  # psi = 1
    assert abs(array_factor(ArrayGeometry(2), np.ones(2), endfire)) < 1e-15
    half = Direction(math.pi / 6, math.pi / 2)    # psi = 0.5
    direct = sum(np.exp(1j * m * math.pi / 2) for m in range(4))
    assert array_factor(ArrayGeometry(4), np.ones(4), half) == pytest.approx(direct, abs=1e-14)
    assert abs(direct) < 1e-14


def test_array_factor_length_mismatch():
    with pytest.raises(ArgumentError):
        array_factor(ArrayGeometry(4), np.ones(3), Direction(0.1))


@pytest.mark.parametrize("n,kd", [(0, math.pi), (2.5, math.pi), (3, 0.0), (3, math.inf)])
def test_geometry_validation(n, kd):
    with pytest.raises(ArgumentError):
        ArrayGeometry(n, kd)
