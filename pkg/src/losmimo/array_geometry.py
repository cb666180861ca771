"""Uniform linear array geometry, steering vectors and the array factor."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError, DomainError


class Axis(str, enum.Enum):
    """Orientation of the array."""

    Y = "y"
    Z = "z"


@dataclass(frozen=True)
class ArrayGeometry:
    """Receive array: element count, wavenumber-spacing product and axis.

    Only the product ``kd`` matters to every quantity in the package;
    ``kd = pi`` is half-wavelength spacing.
    """

    n_elements: int
    kd: float = math.pi
    axis: Axis = Axis.Y

    def __post_init__(self):
        if int(self.n_elements) != self.n_elements or self.n_elements < 1:
            raise ArgumentError("n_elements must be a positive integer")
        if not (math.isfinite(self.kd) and self.kd > 0):
            raise ArgumentError("kd must be finite and positive")
        object.__setattr__(self, "axis", Axis(self.axis))


@dataclass(frozen=True)
class Direction:
    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.theta) and math.isfinite(self.phi)):
            raise DomainError("direction angles must be finite")


def direction_cosines(axis: Axis, theta, phi):
    """Projection of the arrival direction onto the array axis (vectorized)."""
    if Axis(axis) is Axis.Y:
        return np.sin(theta) * np.sin(phi)
    return np.cos(theta)


def direction_cosine(geom: ArrayGeometry, direction: Direction) -> float:
    """sin(theta) sin(phi) for a y-axis array, cos(theta) for a z-axis array."""
    return float(direction_cosines(geom.axis, direction.theta, direction.phi))


def steering_vector(geom: ArrayGeometry, psi: float) -> np.ndarray:
    """Unit-modulus phasors ``exp(j m kd psi)``, m = 0 .. n_elements - 1."""
    if not math.isfinite(psi) or abs(psi) > 1.0:
        raise DomainError(f"direction cosine must lie in [-1, 1], got {psi}")
    m = np.arange(geom.n_elements)
    return np.exp(1j * geom.kd * psi * m)


def array_factor(geom: ArrayGeometry, weights, direction: Direction) -> complex:
    """Weighted phasor sum over the elements for the given arrival direction."""
    weights = np.asarray(weights, dtype=complex)
    if weights.shape != (geom.n_elements,):
        raise ArgumentError(
            f"expected {geom.n_elements} weights, got shape {weights.shape}"
        )
    a = steering_vector(geom, direction_cosine(geom, direction))
    return complex(np.dot(weights, a))
