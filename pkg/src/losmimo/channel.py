"""Random line-of-sight channel realizations and their spectral statistics.

All array-valued functions broadcast over leading batch axes: an
:class:`AngleDraw` with ``theta.shape == (trials, n_t)`` yields channel
matrices of shape ``(trials, n_r, n_t)`` and so on.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import rng
from .array_geometry import ArrayGeometry, Axis, direction_cosines
from .errors import ArgumentError, InvariantViolation

HERMITIAN_TOL = 1e-12
EIGEN_CLAMP = 1e-10


class ThetaLaw(str, enum.Enum):
    UNIFORM_0_PI = "uniform-0-pi"
    UNIFORM_0_HALF_PI = "uniform-0-half-pi"

    @property
    def upper(self) -> float:
        return math.pi if self is ThetaLaw.UNIFORM_0_PI else math.pi / 2


class PhiLaw(str, enum.Enum):
    UNIFORM_0_2PI = "uniform-0-2pi"


@dataclass(frozen=True)
class AngleDistribution:
    """i.i.d. law of each satellite's (theta, phi)."""

    theta_law: ThetaLaw = ThetaLaw.UNIFORM_0_PI
    phi_law: PhiLaw = PhiLaw.UNIFORM_0_2PI

    def __post_init__(self):
        object.__setattr__(self, "theta_law", ThetaLaw(self.theta_law))
        object.__setattr__(self, "phi_law", PhiLaw(self.phi_law))

    @classmethod
    def for_axis(cls, axis: Axis) -> "AngleDistribution":
        # z-axis arrays only see the upper hemisphere, 0 <= theta <= pi/2
        if Axis(axis) is Axis.Z:
            return cls(ThetaLaw.UNIFORM_0_HALF_PI)
        return cls(ThetaLaw.UNIFORM_0_PI)


@dataclass(frozen=True)
class AngleDraw:
    """Directions of n_t satellites; arrays of shape ``(..., n_t)``."""

    theta: np.ndarray
    phi: np.ndarray

    @property
    def n_t(self) -> int:
        return self.theta.shape[-1]

    def direction_cosines(self, axis: Axis) -> np.ndarray:
        return direction_cosines(axis, self.theta, self.phi)


def angles_from_uniforms(u: np.ndarray, n_t: int, law: AngleDistribution) -> AngleDraw:
    """Map ``2 * n_t`` uniforms per trial to angles: first half theta, second half phi."""
    theta = u[..., :n_t] * law.theta_law.upper
    phi = u[..., n_t:2 * n_t] * (2.0 * math.pi)
    return AngleDraw(theta, phi)


def sample_angles(rng_seed: int, n_t: int, law: AngleDistribution | None = None) -> AngleDraw:
    """One reproducible draw of n_t satellite directions.

    This is trial 0 of the Monte Carlo stream keyed by ``rng_seed``.
    """
    if n_t < 1:
        raise ArgumentError("n_t must be at least 1")
    law = law or AngleDistribution()
    u = rng.uniforms(rng_seed, 0, 1, 2 * n_t)[0]
    return angles_from_uniforms(u, n_t, law)


def build_channel(geom: ArrayGeometry, draw: AngleDraw) -> np.ndarray:
    """Vandermonde LoS channel: column i is the steering vector of satellite i."""
    psi = draw.direction_cosines(geom.axis)
    m = np.arange(geom.n_elements, dtype=float)
    return np.exp(1j * geom.kd * m[:, None] * psi[..., None, :])


def gram_normalized(h: np.ndarray) -> np.ndarray:
    """W = H^H H / (n_r n_t), which has unit trace for unit-modulus H."""
    n_r, n_t = h.shape[-2:]
    return np.conj(np.swapaxes(h, -1, -2)) @ h / (n_r * n_t)


def spectrum(w: np.ndarray, check: bool = True) -> np.ndarray:
    """Eigenvalues of Hermitian W, sorted descending, tiny negatives clamped to 0."""
    if check:
        asym = np.max(np.abs(w - np.conj(np.swapaxes(w, -1, -2))), initial=0.0)
        if asym > HERMITIAN_TOL:
            raise InvariantViolation(f"matrix is not Hermitian (max deviation {asym:.3g})")
    lam = np.linalg.eigvalsh(w)[..., ::-1]
    if check and np.any(lam < -EIGEN_CLAMP):
        raise InvariantViolation(f"matrix is not PSD (min eigenvalue {lam.min():.3g})")
    return np.where(lam < 0.0, 0.0, lam)


def trace_power(w: np.ndarray, k: int):
    """Tr(W^k) for k in {1, 2, 3} by explicit matrix products."""
    if k == 1:
        out = np.trace(w, axis1=-2, axis2=-1).real
    elif k == 2:
        out = np.einsum("...ij,...ji->...", w, w).real
    elif k == 3:
        out = np.einsum("...ij,...ji->...", w @ w, w).real
    else:
        raise ArgumentError(f"trace_power supports k in {{1, 2, 3}}, got {k}")
    return float(out) if np.ndim(out) == 0 else out


def capacity(eigenvalues, snr: float):
    """Equal-power capacity sum_i log2(1 + snr * lambda_i) in bit/s/Hz.

    ``snr`` is linear (P / sigma^2). Reduces over the last axis.
    """
    if not snr >= 0:
        raise ArgumentError("snr must be non-negative (linear scale)")
    lam = np.asarray(eigenvalues, dtype=float)
    out = np.log1p(snr * lam).sum(axis=-1) / math.log(2.0)
    return float(out) if np.ndim(out) == 0 else out
