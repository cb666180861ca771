"""Deterministic Monte Carlo harness over random satellite directions.

Trial ``t`` draws its angles from the counter-based stream at
``(master_seed, t)`` (see :mod:`losmimo.rng`). Trials are processed in chunks
whose boundaries depend only on the problem size, never on the worker count,
and chunk results are merged in trial order; the output is therefore bitwise
identical for any number of workers.
"""

from __future__ import annotations

import enum
import hashlib
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace
from typing import Callable, Sequence

import numpy as np
from scipy import stats as sps

from . import rng
from .array_geometry import ArrayGeometry, Axis
from .channel import (
    AngleDistribution,
    ThetaLaw,
    angles_from_uniforms,
    build_channel,
    capacity,
    gram_normalized,
    spectrum,
)
from .errors import ArgumentError, DegenerateConfigurationError, ResourceExhausted
from .moments import MomentConfig
from .outage import CapacityStats, MomentSource, OutageMethod, OutagePoint, outage_probabilities

AD_CRITICAL_1PCT = 1.092
_CHUNK_BUDGET = 1 << 20   # complex entries per chunk, bounds memory


def db_to_linear(snr_db: float) -> float:
    return 10.0 ** (snr_db / 10.0)


@dataclass(frozen=True)
class ExperimentConfig:
    n_t: int
    n_r: int
    kd: float = math.pi
    axis: Axis = Axis.Y
    snr_db: float = 10.0
    trials: int = 100_000
    master_seed: int = 42
    workers: int = 1
    theta_law: ThetaLaw | None = None

    def __post_init__(self):
        MomentConfig(self.n_t, self.n_r, self.kd, self.axis)  # validates sizes and kd
        object.__setattr__(self, "axis", Axis(self.axis))
        if self.theta_law is not None:
            object.__setattr__(self, "theta_law", ThetaLaw(self.theta_law))
        if self.trials < 1:
            raise ArgumentError("trials must be at least 1")
        if self.workers < 1:
            raise ArgumentError("workers must be at least 1")
        if not math.isfinite(self.snr_db):
            raise ArgumentError("snr_db must be finite")
        rng.philox_key(self.master_seed)

    @property
    def snr(self) -> float:
        return db_to_linear(self.snr_db)

    @property
    def geometry(self) -> ArrayGeometry:
        return ArrayGeometry(self.n_r, self.kd, self.axis)

    @property
    def law(self) -> AngleDistribution:
        if self.theta_law is None:
            return AngleDistribution.for_axis(self.axis)
        return AngleDistribution(self.theta_law)

    @property
    def moment_config(self) -> MomentConfig:
        return MomentConfig(self.n_t, self.n_r, self.kd, self.axis)

    def canonical(self) -> dict:
        """Everything that determines the samples (the worker count does not)."""
        d = asdict(self)
        d.pop("workers")
        d["axis"] = self.axis.value
        d["theta_law"] = self.law.theta_law.value
        return d

    def digest(self) -> str:
        blob = json.dumps(self.canonical(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()

    @property
    def chunk_trials(self) -> int:
        per_trial = self.n_r * self.n_t + self.n_t * self.n_t * max(self.n_r - 1, 1)
        return int(max(32, min(8192, _CHUNK_BUDGET // per_trial)))


class Statistic(str, enum.Enum):
    CAPACITY = "capacity"
    TRACE_W2 = "trace_w2"
    TRACE_W3 = "trace_w3"
    F1 = "f1"                     # F-row 1: sum_r g(psi_1 - psi_r)
    F2 = "f2"
    OMEGA = "omega"               # sum_{i,j} g(psi_i - psi_j)
    PAIR_1N = "pair_1n"           # g(psi_1 - psi_nt)
    PAIR_2N = "pair_2n"           # g(psi_2 - psi_nt)
    TRACE3_TWO_EQUAL = "trace3_two_equal"
    TRACE3_ALL_DISTINCT = "trace3_all_distinct"


_NEEDS_NT2 = {Statistic.F1, Statistic.F2, Statistic.PAIR_1N}
_NEEDS_NT3 = {Statistic.PAIR_2N}


@dataclass(frozen=True)
class SampleSet:
    values: np.ndarray
    config_hash: str
    statistic: Statistic

    @property
    def trials(self) -> int:
        return self.values.size

    def mean(self) -> float:
        return float(self.values.mean())

    def std_error(self) -> float:
        return float(self.values.std(ddof=1) / math.sqrt(self.values.size))

    def digest(self) -> str:
        return hashlib.sha256(np.ascontiguousarray(self.values).tobytes()).hexdigest()


def _pair_kernel(diff: np.ndarray, n_r: int, kd: float) -> np.ndarray:
    """g(x) = sum_{s=1}^{n_r-1} (n_r - s) cos(s kd x), elementwise."""
    out = np.zeros_like(diff)
    for s in range(1, n_r):
        out += (n_r - s) * np.cos(s * kd * diff)
    return out


def _draw(cfg: ExperimentConfig, start: int, count: int):
    u = rng.uniforms(cfg.master_seed, start, count, 2 * cfg.n_t)
    return angles_from_uniforms(u, cfg.n_t, cfg.law)


def _chunk_statistics(cfg: ExperimentConfig, statistics: tuple, snrs: tuple, start: int, count: int):
    draw = _draw(cfg, start, count)
    n_t, n_r, kd = cfg.n_t, cfg.n_r, cfg.kd
    out = {}
    need_gram = any(
        s in statistics
        for s in (Statistic.CAPACITY, Statistic.TRACE_W2, Statistic.TRACE_W3,
                  Statistic.TRACE3_TWO_EQUAL, Statistic.TRACE3_ALL_DISTINCT)
    )
    if need_gram:
        g = gram_normalized(build_channel(cfg.geometry, draw))
        if Statistic.CAPACITY in statistics:
            lam = spectrum(g, check=False)
            out[Statistic.CAPACITY] = [capacity(lam, r) for r in snrs]
        g2 = None
        if {Statistic.TRACE_W2, Statistic.TRACE3_TWO_EQUAL} & set(statistics):
            g2 = np.einsum("...ij,...ij->...", g, np.conj(g)).real
            out[Statistic.TRACE_W2] = g2
        if {Statistic.TRACE_W3, Statistic.TRACE3_TWO_EQUAL, Statistic.TRACE3_ALL_DISTINCT} & set(statistics):
            t3 = np.einsum("...ij,...ji->...", g @ g, g).real
            out[Statistic.TRACE_W3] = t3
            if g2 is None:
                g2 = np.einsum("...ij,...ij->...", g, np.conj(g)).real
            # W_ii = 1 / n_t; scaled G = n_r n_t W
            all_equal = 1.0 / n_t ** 2
            two_equal = 3.0 / n_t * (g2 - 1.0 / n_t)
            out[Statistic.TRACE3_TWO_EQUAL] = two_equal
            out[Statistic.TRACE3_ALL_DISTINCT] = t3 - all_equal - two_equal
    psi = draw.direction_cosines(cfg.axis)
    if Statistic.OMEGA in statistics:
        diff = psi[:, :, None] - psi[:, None, :]
        out[Statistic.OMEGA] = _pair_kernel(diff, n_r, kd).sum(axis=(1, 2))
    if Statistic.F1 in statistics or Statistic.F2 in statistics:
        rows = _pair_kernel(psi[:, :2, None] - psi[:, None, :], n_r, kd).sum(axis=2)
        out[Statistic.F1] = rows[:, 0]
        out[Statistic.F2] = rows[:, 1]
    if Statistic.PAIR_1N in statistics:
        out[Statistic.PAIR_1N] = _pair_kernel(psi[:, 0] - psi[:, -1], n_r, kd)
    if Statistic.PAIR_2N in statistics:
        out[Statistic.PAIR_2N] = _pair_kernel(psi[:, 1] - psi[:, -1], n_r, kd)
    return {k: v for k, v in out.items() if k in statistics}


def _chunk_f_rows(cfg: ExperimentConfig, rows: tuple, start: int, count: int):
    psi = _draw(cfg, start, count).direction_cosines(cfg.axis)
    idx = np.array(rows) - 1
    return _pair_kernel(psi[:, idx, None] - psi[:, None, :], cfg.n_r, cfg.kd).sum(axis=2)


def _chunks(cfg: ExperimentConfig) -> list[tuple[int, int]]:
    size = cfg.chunk_trials
    return [(s, min(size, cfg.trials - s)) for s in range(0, cfg.trials, size)]


def _map_chunks(cfg: ExperimentConfig, fn: Callable, *args) -> list:
    chunks = _chunks(cfg)
    results = []
    done = 0
    try:
        if cfg.workers == 1 or len(chunks) == 1:
            for start, count in chunks:
                results.append(fn(cfg, *args, start, count))
                done += count
        else:
            with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
                futures = [pool.submit(fn, cfg, *args, s, c) for s, c in chunks]
                for f, (_, count) in zip(futures, chunks):
                    results.append(f.result())
                    done += count
    except MemoryError as exc:
        raise ResourceExhausted("Monte Carlo run exhausted memory", done) from exc
    return results


def _validate(cfg: ExperimentConfig, statistic: Statistic):
    if statistic in _NEEDS_NT2 and cfg.n_t < 2:
        raise ArgumentError(f"statistic {statistic.value} needs n_t >= 2")
    if statistic in _NEEDS_NT3 and cfg.n_t < 3:
        raise ArgumentError(f"statistic {statistic.value} needs n_t >= 3")
    if statistic is Statistic.CAPACITY:
        raise ArgumentError("use run_capacity_mc for capacity samples")


def run_statistics_mc(cfg: ExperimentConfig, statistics: Sequence[Statistic]) -> dict[Statistic, SampleSet]:
    """Several per-trial statistics evaluated on the same angle draws."""
    stats = tuple(Statistic(s) for s in statistics)
    for s in stats:
        _validate(cfg, s)
    parts = _map_chunks(cfg, _chunk_statistics, stats, ())
    digest = cfg.digest()
    return {
        s: SampleSet(np.concatenate([p[s] for p in parts]), digest, s) for s in stats
    }


def run_statistic_mc(cfg: ExperimentConfig, statistic: Statistic) -> SampleSet:
    return run_statistics_mc(cfg, [statistic])[Statistic(statistic)]


def run_capacity_sweep_mc(cfg: ExperimentConfig, snr_dbs: Sequence[float]) -> dict[float, SampleSet]:
    """Capacity samples at several SNRs sharing one set of channel draws.

    Each entry equals ``run_capacity_mc(replace(cfg, snr_db=x))``.
    """
    snr_dbs = [float(x) for x in snr_dbs]
    snrs = tuple(db_to_linear(x) for x in snr_dbs)
    parts = _map_chunks(cfg, _chunk_statistics, (Statistic.CAPACITY,), snrs)
    out = {}
    for i, x in enumerate(snr_dbs):
        values = np.concatenate([p[Statistic.CAPACITY][i] for p in parts])
        out[x] = SampleSet(values, replace(cfg, snr_db=x).digest(), Statistic.CAPACITY)
    return out


def run_capacity_mc(cfg: ExperimentConfig) -> SampleSet:
    """Instantaneous capacities C_t = sum_i log2(1 + snr lambda_i), one per trial."""
    return run_capacity_sweep_mc(cfg, [cfg.snr_db])[float(cfg.snr_db)]


def run_f_rows_mc(cfg: ExperimentConfig, rows: Sequence[int]) -> np.ndarray:
    """F-row sums for the given 1-based rows; shape ``(trials, len(rows))``."""
    rows = tuple(int(r) for r in rows)
    if cfg.n_t < 2 or any(not 1 <= r <= cfg.n_t for r in rows):
        raise ArgumentError(f"rows must lie in [1, {cfg.n_t}] with n_t >= 2")
    return np.concatenate(_map_chunks(cfg, _chunk_f_rows, rows), axis=0)


def empirical_outage_probabilities(samples: SampleSet, r_grid) -> np.ndarray:
    """Fraction of capacity samples strictly below each rate."""
    values = np.sort(samples.values)
    return np.searchsorted(values, np.asarray(r_grid, dtype=float), side="left") / values.size


def empirical_outage(samples: SampleSet, r_grid: Sequence[float]) -> list[OutagePoint]:
    if samples.statistic is not Statistic.CAPACITY:
        raise ArgumentError("empirical outage needs capacity samples")
    grid = np.asarray(r_grid, dtype=float)
    if np.any(np.diff(grid) < 0):
        raise ArgumentError("rate grid must be sorted ascending")
    p = empirical_outage_probabilities(samples, grid)
    return [OutagePoint(float(r), float(q), OutageMethod.EMPIRICAL) for r, q in zip(grid, p)]


def central_rate_grid(samples: SampleSet, coverage: float = 0.999, steps: int = 2001) -> np.ndarray:
    """Evenly spaced rates spanning the central ``coverage`` mass of the samples."""
    tail = (1.0 - coverage) / 2
    lo, hi = np.quantile(samples.values, [tail, 1.0 - tail])
    return np.linspace(lo, hi, steps)


def gaussian_stats(samples: SampleSet, snr: float) -> CapacityStats:
    return CapacityStats(
        float(samples.values.mean()), float(samples.values.var(ddof=1)), snr, MomentSource.MONTE_CARLO
    )


def gaussian_empirical_gap(samples: SampleSet, snr: float, r_grid=None) -> float:
    """Sup-norm distance between the Gaussian (sample moments) and empirical outage curves."""
    grid = central_rate_grid(samples) if r_grid is None else np.asarray(r_grid, dtype=float)
    gauss = outage_probabilities(gaussian_stats(samples, snr), grid)
    return float(np.max(np.abs(gauss - empirical_outage_probabilities(samples, grid))))


def normality_check(samples: SampleSet | np.ndarray, min_samples: int = 10_000) -> float:
    """Anderson-Darling statistic of the standardized samples against N(0, 1).

    Compare with :data:`AD_CRITICAL_1PCT` (1% level, estimated mean and variance).
    """
    x = np.asarray(getattr(samples, "values", samples), dtype=float)
    if x.size < min_samples:
        raise ArgumentError(f"normality check needs at least {min_samples} samples")
    sd = x.std()
    if not sd > 1e-12 * max(1.0, abs(x.mean())):
        raise DegenerateConfigurationError("samples have zero variance")
    return float(sps.anderson((x - x.mean()) / sd, dist="norm").statistic)


def standard_normal_samples(master_seed: int, trials: int) -> np.ndarray:
    """Box-Muller calibration samples from the harness stream."""
    return rng.standard_normals(master_seed, 0, trials)
