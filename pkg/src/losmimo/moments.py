"""Closed-form Bessel-series expectations over random satellite directions.

Notation used throughout: ``g(x) = sum_{s=1}^{n_r-1} (n_r - s) cos(s kd x)`` is
the cosine kernel of one ordered satellite pair, evaluated at the difference
of their direction cosines. Expanding ``Tr (H^H H)^2`` gives
``sum_{i,j} (n_r + 2 g(psi_i - psi_j))``; the F-rows group these pair terms
row by row, ``F_l = sum_r g(psi_l - psi_r)``.

The Lemma machinery (type A/B expectations, F-row covariances, C_F) is
defined for the y-axis angular law only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .array_geometry import Axis
from .errors import AnalyticFormUnavailable, ArgumentError, DegenerateConfigurationError
from .specfun import bessel_j0


@dataclass(frozen=True)
class MomentConfig:
    n_t: int
    n_r: int
    kd: float = math.pi
    axis: Axis = Axis.Y

    def __post_init__(self):
        for name in ("n_t", "n_r"):
            v = getattr(self, name)
            if int(v) != v or v < 1:
                raise ArgumentError(f"{name} must be a positive integer")
        if not (math.isfinite(self.kd) and self.kd > 0):
            raise ArgumentError("kd must be finite and positive")
        object.__setattr__(self, "axis", Axis(self.axis))

    @property
    def lags(self) -> np.ndarray:
        return np.arange(1, self.n_r)

    @property
    def lag_weights(self) -> np.ndarray:
        return (self.n_r - self.lags).astype(float)


def _j0(x):
    return np.asarray(bessel_j0(x))


def _require_y(cfg: MomentConfig, what: str):
    if cfg.axis is not Axis.Y:
        raise AnalyticFormUnavailable(f"{what} has a closed form for the y axis only")


def kernel(s, cfg: MomentConfig):
    """E[cos(s kd (psi_i - psi_j))] for two distinct satellites.

    J0(s kd / 2)^4 on the y axis, J0(s kd / 2)^2 on the z axis.
    """
    power = 4 if cfg.axis is Axis.Y else 2
    return _j0(np.asarray(s, dtype=float) * cfg.kd / 2.0) ** power


def ef11(cfg: MomentConfig) -> float:
    """Expected pair term of a satellite with itself: n_r (n_r - 1) / 2."""
    return cfg.n_r * (cfg.n_r - 1) / 2


def ef12(cfg: MomentConfig) -> float:
    """Expected pair term g(psi_i - psi_j) for i != j."""
    if cfg.n_r < 2:
        return 0.0
    return float(np.sum(cfg.lag_weights * kernel(cfg.lags, cfg)))


def mu_omega(cfg: MomentConfig) -> float:
    """Mean of the cosine part of Tr (H^H H)^2: n_t diagonal and n_t^2 - n_t
    off-diagonal pair terms."""
    return cfg.n_t * ef11(cfg) + (cfg.n_t ** 2 - cfg.n_t) * ef12(cfg)


def expected_trace2(cfg: MomentConfig) -> float:
    """E{Tr W^2}; lies in [1/n_t, 1]."""
    n_t, n_r = cfg.n_t, cfg.n_r
    num = n_r ** 2 * n_t + n_r * n_t * (n_t - 1) + 2 * n_t * (n_t - 1) * ef12(cfg)
    return num / (n_r * n_t) ** 2


def trace3_terms(cfg: MomentConfig) -> dict[str, float]:
    """The seven summands of the z-axis third-moment numerator, as printed.

    Before normalization by ``(n_r n_t)^3``. The undefined symbol in the
    positive-part factor of the last term is read as the outer lag ``s``;
    the half-range sum runs to ``floor((n_r - 1) / 2)``.
    """
    n_t, n_r, kd = cfg.n_t, cfg.n_r, cfg.kd
    s = cfg.lags.astype(float)
    w = cfg.lag_weights
    terms = {
        "diag": float(n_r ** 3 * n_t),
        "pair_const": float(3 * n_r ** 2 * n_t * (n_t - 1)),
        "triple_const": float(n_r * n_t * (n_t - 1) * (n_t - 2)),
        "pair_bessel": 0.0,
        "triple_rising": 0.0,
        "triple_half": 0.0,
        "triple_double": 0.0,
    }
    if n_r < 2:
        return terms
    terms["pair_bessel"] = float(
        6 * np.sum(n_r * w * n_t * (n_t - 1) * _j0(s * kd / 2) ** 4)
    )
    rising = s * (s + 1) * (s + 2)
    terms["triple_rising"] = float(
        6 * np.sum((n_t - 2) * rising * _j0((n_r - s) * kd / 2) ** 2)
    )
    half = np.arange(1, (n_r - 1) // 2 + 1, dtype=float)
    if half.size:
        base = n_r - 2 * half
        terms["triple_half"] = float(
            6 * np.sum(
                (n_t - 2) * base * (base + 1) * (base + 2)
                * _j0(half * kd / 2) ** 4 * _j0(half * kd)
            )
        )
    total = 0.0
    for si in range(1, n_r):
        pos = max(n_r - 2 * si, 0)
        for ti in range(1, n_r - 2 * si + 1):
            base = 2 * n_r - 2 * ti - 2 * si + 2
            total += (
                pos * (n_t - 2) * base * (base + 1) * (base + 2)
                * bessel_j0(si * kd / 2)
                * bessel_j0((si + ti) * kd / 2)
                * bessel_j0((2 * si + ti) * kd / 2)
            )
    terms["triple_double"] = 6 * total
    return terms


# Index-pattern groups of Tr (H^H H)^3 = sum_{i,j,k} G_ij G_jk G_ki that each
# printed summand belongs to.
TRACE3_GROUPS = {
    "all_equal": ("diag",),
    "two_equal": ("pair_const", "pair_bessel"),
    "all_distinct": ("triple_const", "triple_rising", "triple_half", "triple_double"),
}


def trace3_group_values(cfg: MomentConfig) -> dict[str, float]:
    """Printed third-moment numerator split by index pattern, normalized."""
    terms = trace3_terms(cfg)
    norm = float(cfg.n_r * cfg.n_t) ** 3
    return {g: sum(terms[t] for t in names) / norm for g, names in TRACE3_GROUPS.items()}


def expected_trace3(cfg: MomentConfig) -> float:
    """E{Tr W^3} for the z-axis array, summing the printed closed form.

    The y axis has no closed form here; callers must estimate by simulation.
    """
    if cfg.axis is not Axis.Z:
        raise AnalyticFormUnavailable(
            "no closed-form E{Tr W^3} for the y axis; use the Monte Carlo estimator"
        )
    if cfg.n_t == 1:
        return 1.0  # W is the 1x1 matrix [1]
    return sum(trace3_terms(cfg).values()) / float(cfg.n_r * cfg.n_t) ** 3


def _check_lag(s: int, cfg: MomentConfig, name: str = "s"):
    if int(s) != s or not 1 <= s <= cfg.n_r - 1:
        raise ArgumentError(f"{name} must be an integer in [1, {cfg.n_r - 1}], got {s}")


def type_a_expectation(s: int, cfg: MomentConfig) -> float:
    """E[cos(s kd g_1) cos(s kd g_2)] for two pair differences sharing one satellite."""
    _require_y(cfg, "type A expectation")
    _check_lag(s, cfg)
    x = s * cfg.kd
    return 0.5 * bessel_j0(x / 2) ** 4 * (1.0 + bessel_j0(x) ** 2)


def _type_b(s1, s2, kd):
    return (
        0.5 * _j0(s1 * kd / 2) ** 2 * _j0(s2 * kd / 2) ** 2
        * (_j0((s1 + s2) * kd / 2) ** 2 + _j0(np.abs(s1 - s2) * kd / 2) ** 2)
    )


def type_b_expectation(s1: int, s2: int, cfg: MomentConfig) -> float:
    """E[cos(s1 kd g_1) cos(s2 kd g_2)] for distinct lags, shared satellite."""
    _require_y(cfg, "type B expectation")
    _check_lag(s1, cfg, "s1")
    _check_lag(s2, cfg, "s2")
    if s1 == s2:
        raise ArgumentError("type B requires s1 != s2; equal lags are type A")
    return float(_type_b(float(s1), float(s2), cfg.kd))


def red_sum(cfg: MomentConfig) -> float:
    """Equal-lag contributions to E[g(x_1) g(x_2)] with a shared satellite."""
    _require_y(cfg, "red sum")
    if cfg.n_r < 2:
        return 0.0
    w = cfg.lag_weights
    a = np.array([type_a_expectation(int(s), cfg) for s in cfg.lags])
    return float(np.sum(w ** 2 * a))


def blue_sum(cfg: MomentConfig) -> float:
    """Distinct-lag contributions to E[g(x_1) g(x_2)] with a shared satellite."""
    _require_y(cfg, "blue sum")
    if cfg.n_r < 3:
        return 0.0
    s1, s2 = np.meshgrid(cfg.lags.astype(float), cfg.lags.astype(float), indexing="ij")
    w = np.outer(cfg.lag_weights, cfg.lag_weights)
    off = s1 != s2
    return float(np.sum((w * _type_b(s1, s2, cfg.kd))[off]))


def shared_pair_covariance(cfg: MomentConfig) -> float:
    """Cov(g(psi_1 - psi_n), g(psi_2 - psi_n)): red + blue - E(F12)^2."""
    return red_sum(cfg) + blue_sum(cfg) - ef12(cfg) ** 2


def cov_f_cross(cfg: MomentConfig) -> float:
    """Cross-row covariance n_t * (red + blue - E(F12)^2), counting n_t
    correlated term pairs between two F-rows."""
    _require_y(cfg, "F-row covariance")
    if cfg.n_t < 2:
        raise ArgumentError("F-row covariance needs n_t >= 2")
    if cfg.n_r < 2:
        return 0.0
    return cfg.n_t * shared_pair_covariance(cfg)


def _squared_kernel_sum(cfg: MomentConfig, include_equal: bool) -> float:
    s1, s2 = np.meshgrid(cfg.lags.astype(float), cfg.lags.astype(float), indexing="ij")
    w = np.outer(cfg.lag_weights, cfg.lag_weights)
    k = 0.5 * (_j0((s1 + s2) * cfg.kd / 2) ** 4 + _j0(np.abs(s1 - s2) * cfg.kd / 2) ** 4)
    if not include_equal:
        k = np.where(s1 != s2, k, 0.0)
    return float(np.sum(w * k))


def var_f1nT(cfg: MomentConfig) -> float:
    """Variance of one off-diagonal pair term g(psi_i - psi_j)."""
    _require_y(cfg, "pair-term variance")
    if cfg.n_r < 2:
        return 0.0
    s = cfg.lags.astype(float)
    w = cfg.lag_weights
    equal = np.sum(w ** 2 * 0.5 * (1.0 + _j0(s * cfg.kd) ** 4))
    return float(equal + _squared_kernel_sum(cfg, include_equal=False) - ef12(cfg) ** 2)


def var_f1(cfg: MomentConfig) -> float:
    """F-row variance: n_t Var(F_1i) + n_t (n_t - 1) / 2 * Cov(F_1i, F_1j)."""
    _require_y(cfg, "F-row variance")
    if cfg.n_t < 2:
        raise ArgumentError("F-row variance needs n_t >= 2")
    if cfg.n_r < 2:
        return 0.0
    n_t = cfg.n_t
    return n_t * var_f1nT(cfg) + n_t * (n_t - 1) / 2 * shared_pair_covariance(cfg)


def correlation_cf(cfg: MomentConfig) -> float:
    """Correlation coefficient C_F between F-rows, in its simplified closed form.

    Numerator: red + blue - E(F12)^2 over the full (s1, s2) grid.
    Denominator: sum_{s1,s2} w1 w2 (J0((s1+s2)kd/2)^4 + J0(|s1-s2|kd/2)^4) / 2.
    """
    _require_y(cfg, "C_F")
    if cfg.n_t < 2:
        raise ArgumentError("C_F needs n_t >= 2")
    denom = _squared_kernel_sum(cfg, include_equal=True) if cfg.n_r >= 2 else 0.0
    if denom <= 0.0:
        raise DegenerateConfigurationError("C_F denominator vanishes (n_r < 2)")
    s1, s2 = np.meshgrid(cfg.lags.astype(float), cfg.lags.astype(float), indexing="ij")
    w = np.outer(cfg.lag_weights, cfg.lag_weights)
    num = float(np.sum(w * _type_b(s1, s2, cfg.kd))) - ef12(cfg) ** 2
    return num / denom
