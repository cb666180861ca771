"""Oracle checks comparing every closed form with an independent route.

Each check returns a :class:`CheckResult`. ``kind`` separates algebraic and
term-level identities from checks of the published aggregate claims (F-row
covariance, C_F, z-axis moments, normality of Tr W^2), which are reported on
the same footing and can fail on a correct build.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import mpmath
import numpy as np
from scipy import integrate

from . import moments as mom
from .array_geometry import Axis
from .channel import spectrum
from .montecarlo import (
    AD_CRITICAL_1PCT,
    ExperimentConfig,
    Statistic,
    gaussian_empirical_gap,
    normality_check,
    run_capacity_mc,
    run_statistics_mc,
)
from .specfun import bessel_j0, gauss_q
from .spectrum_tools import char_poly_from_traces, real_roots, traces_of

LOW_POWER_TRIALS = 10_000


@dataclass
class CheckResult:
    name: str
    kind: str            # "identity" | "claim"
    passed: bool
    measured: float
    expected: float
    tolerance: float
    detail: str = ""
    extra: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return asdict(self)


def mean_se(x: np.ndarray) -> tuple[float, float]:
    return float(x.mean()), float(x.std(ddof=1) / math.sqrt(x.size))


def variance_se(x: np.ndarray) -> tuple[float, float]:
    d2 = (x - x.mean()) ** 2
    return float(x.var(ddof=1)), float(d2.std(ddof=1) / math.sqrt(x.size))


def covariance_se(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    p = (x - x.mean()) * (y - y.mean())
    return float(np.cov(x, y)[0, 1]), float(p.std(ddof=1) / math.sqrt(x.size))


def within_sigma(measured: float, expected: float, se: float, n_sigma: float = 3.0) -> bool:
    return abs(measured - expected) <= n_sigma * se


def _mc_check(name, kind, samples_value, se, expected, n_sigma=3.0, detail=""):
    return CheckResult(
        name, kind, within_sigma(samples_value, expected, se, n_sigma),
        samples_value, expected, n_sigma * se, detail,
    )


def check_specfun(points: int = 2001) -> list[CheckResult]:
    xs = np.linspace(-500, 500, points)
    err_q = 0.0
    with mpmath.workdps(40):
        err_j0 = max(abs(bessel_j0(x) - float(mpmath.besselj(0, x))) for x in xs)
        for x in np.linspace(-8, 8, 161):
            ref = float(mpmath.quad(lambda t: mpmath.exp(-t * t / 2), [x, mpmath.inf])
                        / mpmath.sqrt(2 * mpmath.pi))
            err_q = max(err_q, abs(gauss_q(x) - ref) / ref)
    zs = np.linspace(0, 20, 41)
    err_id = 0.0
    for z in zs:
        val, _ = integrate.quad(lambda t: bessel_j0(2 * z * math.sin(t)), 0, math.pi, limit=400, epsabs=1e-13)
        err_id = max(err_id, abs(val / math.pi - bessel_j0(z) ** 2))
    return [
        CheckResult("bessel_j0_vs_mpmath", "identity", err_j0 <= 1e-12, err_j0, 0.0, 1e-12),
        CheckResult("gauss_q_vs_quadrature", "identity", err_q <= 1e-10, err_q, 0.0, 1e-10),
        CheckResult("j0_squared_angular_identity", "identity", err_id <= 1e-8, err_id, 0.0, 1e-8),
    ]


def check_trace_moments(trials, seed, workers, sizes=((2, 2), (4, 4), (8, 8)), kd=math.pi) -> list[CheckResult]:
    out = []
    for axis in (Axis.Y, Axis.Z):
        for n_t, n_r in sizes:
            cfg = ExperimentConfig(n_t, n_r, kd, axis, trials=trials, master_seed=seed, workers=workers)
            mc = run_statistics_mc(cfg, [Statistic.TRACE_W2, Statistic.TRACE_W3])
            m2, se2 = mean_se(mc[Statistic.TRACE_W2].values)
            kind = "identity" if axis is Axis.Y else "claim"
            out.append(_mc_check(f"trace2_{axis.value}_{n_t}x{n_r}", kind, m2, se2,
                                 mom.expected_trace2(cfg.moment_config)))
            if axis is Axis.Z:
                m3, se3 = mean_se(mc[Statistic.TRACE_W3].values)
                out.append(_mc_check(f"trace3_z_{n_t}x{n_r}", "claim", m3, se3,
                                     mom.expected_trace3(cfg.moment_config)))
    return out


def check_lemma(trials, seed, workers, sizes=((2, 2), (4, 4), (8, 4)), kd=math.pi) -> list[CheckResult]:
    out = []
    for n_t, n_r in sizes:
        cfg = ExperimentConfig(n_t, n_r, kd, Axis.Y, trials=trials, master_seed=seed, workers=workers)
        mcfg = cfg.moment_config
        wanted = [Statistic.OMEGA, Statistic.F1, Statistic.F2, Statistic.PAIR_1N]
        if n_t >= 3:
            wanted.append(Statistic.PAIR_2N)
        mc = run_statistics_mc(cfg, wanted)
        tag = f"{n_t}x{n_r}"
        m, se = mean_se(mc[Statistic.OMEGA].values)
        out.append(_mc_check(f"mu_omega_{tag}", "identity", m, se, mom.mu_omega(mcfg)))
        v, se = variance_se(mc[Statistic.PAIR_1N].values)
        out.append(_mc_check(f"var_f1nT_{tag}", "identity", v, se, mom.var_f1nT(mcfg)))
        if n_t >= 3:
            c, se = covariance_se(mc[Statistic.PAIR_1N].values, mc[Statistic.PAIR_2N].values)
            out.append(_mc_check(f"shared_pair_cov_{tag}", "identity", c, se,
                                 mom.shared_pair_covariance(mcfg)))
        f1, f2 = mc[Statistic.F1].values, mc[Statistic.F2].values
        c, se = covariance_se(f1, f2)
        out.append(_mc_check(f"cov_f_cross_{tag}", "claim", c, se, mom.cov_f_cross(mcfg)))
        r = float(np.corrcoef(f1, f2)[0, 1])
        cf = mom.correlation_cf(mcfg)
        out.append(CheckResult(f"correlation_cf_{tag}", "claim", abs(r - cf) <= 0.02, r, cf, 0.02))
    return out


def check_char_poly(count: int, seed: int) -> list[CheckResult]:
    gen = np.random.default_rng(seed)
    worst_root = worst_sum = 0.0
    for _ in range(count):
        n = int(gen.integers(1, 9))
        b = gen.standard_normal((n, n)) + 1j * gen.standard_normal((n, n))
        a = b @ np.conj(b.T) / n
        t = traces_of(a)
        coeffs = char_poly_from_traces(t)
        lam = spectrum(a)[::-1]
        roots = real_roots(coeffs, 0.0, t[0] + 1.0)
        worst_root = max(worst_root, float(np.max(np.abs(roots - lam))))
        worst_sum = max(worst_sum, abs(-coeffs[1] / coeffs[0] - t[0]) / max(1.0, abs(t[0])))
    return [
        CheckResult("char_poly_roots_vs_eigensolver", "identity", worst_root <= 1e-6, worst_root, 0.0, 1e-6),
        CheckResult("char_poly_root_sum", "identity", worst_sum <= 1e-12, worst_sum, 0.0, 1e-12),
    ]


def check_gaussian_outage(trials, seed, workers, sizes=((8, 8),), snr_db=10.0) -> list[CheckResult]:
    out = []
    for n_t, n_r in sizes:
        cfg = ExperimentConfig(n_t, n_r, snr_db=snr_db, trials=trials, master_seed=seed, workers=workers)
        gap = gaussian_empirical_gap(run_capacity_mc(cfg), cfg.snr)
        out.append(CheckResult(f"gaussian_outage_gap_{n_t}x{n_r}_{snr_db:g}dB", "claim",
                               gap <= 0.05, gap, 0.0, 0.05))
    return out


def check_trace2_normality(trials, seed, workers, n_t=64, n_r=8) -> list[CheckResult]:
    cfg = ExperimentConfig(n_t, n_r, trials=trials, master_seed=seed, workers=workers)
    t2 = run_statistics_mc(cfg, [Statistic.TRACE_W2])[Statistic.TRACE_W2]
    ad = normality_check(t2, min_samples=min(trials, 10_000))
    return [CheckResult(f"trace2_normality_{n_t}x{n_r}", "claim", ad < AD_CRITICAL_1PCT,
                        ad, 0.0, AD_CRITICAL_1PCT)]


def run_all(trials: int = 100_000, seed: int = 42, workers: int = 1, skip: tuple[str, ...] = ()) -> dict:
    """Run every check group not named in ``skip``; returns the JSON report."""
    groups = {
        "specfun": lambda: check_specfun(),
        "trace_moments": lambda: check_trace_moments(trials, seed, workers),
        "lemma": lambda: check_lemma(trials, seed, workers),
        "char_poly": lambda: check_char_poly(200, seed),
        "gaussian_outage": lambda: check_gaussian_outage(trials, seed, workers),
        "normality": lambda: check_trace2_normality(trials, seed, workers),
    }
    results = []
    for name, fn in groups.items():
        if name not in skip:
            results.extend(fn())
    low_power = trials < LOW_POWER_TRIALS
    return {
        "trials": trials,
        "seed": seed,
        "low_power": low_power,
        "mode": "LOW-POWER" if low_power else "FULL",
        "passed": all(r.passed for r in results),
        "checks": [r.as_dict() for r in results],
    }


CHECK_GROUPS = ("specfun", "trace_moments", "lemma", "char_poly", "gaussian_outage", "normality")
