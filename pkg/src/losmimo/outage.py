"""Capacity mean/variance and Gaussian-approximation outage probability."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ArgumentError, TaylorValidityError
from .specfun import gauss_q

LN2 = math.log(2.0)
_RANK_ONE_TOL = 1e-12


class MomentSource(str, enum.Enum):
    ANALYTIC_TAYLOR = "analytic-taylor"
    MONTE_CARLO = "monte-carlo"


class OutageMethod(str, enum.Enum):
    GAUSSIAN_ANALYTIC = "gaussian-analytic"
    GAUSSIAN_MC = "gaussian-mc"
    EMPIRICAL = "empirical"


@dataclass(frozen=True)
class TraceMoments:
    """Expected spectral power sums E{Tr W}, E{Tr W^2}, E{Tr W^3}."""

    trace2: float
    trace3: float
    trace1: float = 1.0


@dataclass(frozen=True)
class CapacityStats:
    mean: float
    variance: float
    snr: float
    source: MomentSource

    def __post_init__(self):
        if self.variance < 0 or self.mean < 0:
            raise ArgumentError("capacity mean and variance must be non-negative")

    @property
    def std(self) -> float:
        return math.sqrt(self.variance)


@dataclass(frozen=True)
class OutagePoint:
    r_th: float
    p_out: float
    method: OutageMethod

    @property
    def p_ccdf(self) -> float:
        return 1.0 - self.p_out


def _check_snr(snr: float):
    if not snr >= 0:
        raise ArgumentError("snr must be non-negative (linear scale)")


def mean_capacity_taylor(moments: TraceMoments, snr: float) -> float:
    """Third-order expansion of E{sum_i log2(1 + snr lambda_i)}."""
    _check_snr(snr)
    r = snr
    return (r * moments.trace1 - r ** 2 * moments.trace2 / 2 + r ** 3 * moments.trace3 / 3) / LN2


def second_moment_capacity_taylor(moments: TraceMoments, snr: float) -> float:
    """E{C^2} kept to third order in snr: (snr^2 - snr^3 E{Tr W^2}) / ln(2)^2.

    Uses Tr W = 1 to collapse (Tr W)^2; at snr = 1 this is
    (1 - E{Tr W^2}) / ln(2)^2.
    """
    _check_snr(snr)
    return (snr ** 2 * moments.trace1 ** 2 - snr ** 3 * moments.trace2) / LN2 ** 2


def capacity_stats(
    snr: float,
    source: MomentSource = MomentSource.ANALYTIC_TAYLOR,
    *,
    moments: TraceMoments | None = None,
    samples: Sequence[float] | np.ndarray | None = None,
) -> CapacityStats:
    """Mean and variance of capacity at linear SNR ``snr``.

    ``ANALYTIC_TAYLOR`` needs ``moments``; ``MONTE_CARLO`` needs capacity
    ``samples`` drawn at the same SNR. A rank-one channel (E{Tr W^2} = 1)
    has the deterministic capacity log2(1 + snr) and zero variance.
    """
    _check_snr(snr)
    source = MomentSource(source)
    if source is MomentSource.MONTE_CARLO:
        if samples is None:
            raise ArgumentError("Monte Carlo statistics need capacity samples")
        x = np.asarray(samples, dtype=float)
        if x.size < 2:
            raise ArgumentError("need at least two capacity samples")
        return CapacityStats(float(x.mean()), float(x.var(ddof=1)), snr, source)

    if moments is None:
        raise ArgumentError("analytic Taylor statistics need trace moments")
    if abs(moments.trace2 - 1.0) <= _RANK_ONE_TOL:
        # a single unit eigenvalue: capacity is log2(1 + snr) exactly, at any snr
        return CapacityStats(math.log1p(snr * moments.trace1) / LN2, 0.0, snr, source)
    mean = mean_capacity_taylor(moments, snr)
    var = second_moment_capacity_taylor(moments, snr) - mean ** 2
    if var < 0 or mean < 0:
        raise TaylorValidityError(
            f"third-order expansion gives variance {var:.3g} at snr={snr:g}; "
            "use MomentSource.MONTE_CARLO"
        )
    return CapacityStats(mean, var, snr, source)


def outage_probabilities(stats: CapacityStats, r_th) -> np.ndarray:
    """Vectorized Q((mean - r) / std), with a step at the mean when std = 0."""
    r = np.asarray(r_th, dtype=float)
    if stats.variance == 0.0:
        return np.where(r > stats.mean, 1.0, np.where(r < stats.mean, 0.0, 0.5))
    return np.asarray(gauss_q((stats.mean - r) / stats.std))


def outage_gaussian(stats: CapacityStats, r_th: float) -> OutagePoint:
    """Gaussian-approximation outage probability P(C < r_th)."""
    method = (
        OutageMethod.GAUSSIAN_MC
        if stats.source is MomentSource.MONTE_CARLO
        else OutageMethod.GAUSSIAN_ANALYTIC
    )
    return OutagePoint(float(r_th), float(outage_probabilities(stats, r_th)), method)


def outage_curve(stats: CapacityStats, r_grid: Sequence[float]) -> list[OutagePoint]:
    grid = np.asarray(r_grid, dtype=float)
    if np.any(np.diff(grid) < 0):
        raise ArgumentError("rate grid must be sorted ascending")
    return [outage_gaussian(stats, r) for r in grid]
