"""Command-line entry point: ``losmimo <command> [flags]``.

Precedence for every setting: command-line flag > ``--config`` JSON file >
built-in default. SNR is given in dB on the command line and converted to
linear scale once, here.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from . import moments as mom
from .array_geometry import Axis
from .errors import AnalyticFormUnavailable, ArgumentError, LosMimoError, TaylorValidityError
from .montecarlo import (
    ExperimentConfig,
    Statistic,
    central_rate_grid,
    empirical_outage_probabilities,
    gaussian_stats,
    run_capacity_mc,
    run_capacity_sweep_mc,
    run_f_rows_mc,
    run_statistics_mc,
)
from .outage import MomentSource, OutageMethod, TraceMoments, capacity_stats, outage_probabilities
from .rng import RNG_ID
from . import verification

log = logging.getLogger("losmimo")

EXIT_OK, EXIT_USAGE, EXIT_CHECK, EXIT_RUNTIME = 0, 1, 2, 3

DEFAULTS = {
    "ntx": 4,
    "nrx": 4,
    "kd": math.pi,
    "axis": "y",
    "snr_db": 10.0,
    "trials": 100_000,
    "seed": 42,
    "workers": 1,
}
_COMMON = tuple(DEFAULTS)
_CONFIG_EXTRAS = {"methods", "r_min", "r_max", "r_steps", "snr_list", "pairs"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fmt(x) -> str:
    return "" if x is None else repr(float(x))


# ----------------------------------------------------------------------------
# settings and outputs
# ----------------------------------------------------------------------------

def _settings(args) -> dict:
    """Merge defaults, config file and explicit flags; records which were defaulted."""
    merged = dict(DEFAULTS)
    from_file = {}
    if args.config:
        try:
            from_file = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(from_file, dict):
            raise UsageError("config file must hold a JSON object")
        unknown = set(from_file) - set(DEFAULTS) - _CONFIG_EXTRAS
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        merged.update(from_file)
    explicit = {k for k in _COMMON if getattr(args, k, None) is not None}
    for key in explicit:
        merged[key] = getattr(args, key)
    merged["_defaulted"] = sorted(k for k in _COMMON if k not in explicit and k not in from_file)
    merged["axis"] = str(merged["axis"]).lower()
    if merged["axis"] not in ("y", "z"):
        raise UsageError("axis must be y or z")
    return merged


def _extra(args, settings: dict, key: str, default=None):
    val = getattr(args, key, None)
    return val if val is not None else settings.get(key, default)


def _experiment(s: dict, n_t=None, n_r=None, snr_db=None) -> ExperimentConfig:
    return ExperimentConfig(
        int(s["ntx"] if n_t is None else n_t),
        int(s["nrx"] if n_r is None else n_r),
        float(s["kd"]),
        Axis(s["axis"]),
        float(s["snr_db"] if snr_db is None else snr_db),
        int(s["trials"]),
        int(s["seed"]),
        int(s["workers"]),
    )


def _config_digest(command: str, s: dict) -> str:
    echo = {k: v for k, v in s.items() if k not in ("workers", "_defaulted")}
    blob = json.dumps({"command": command, **echo}, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()


class _Outputs:
    """Collects primary outputs and writes the run manifest alongside them."""

    def __init__(self, command: str, settings: dict, out: str | None, manifest: str | None):
        self.command = command
        self.settings = settings
        self.out = out
        self.manifest_path = manifest or (f"{out}.manifest.json" if out and out != "-" else None)
        self.files: list[str] = []
        self.started = time.perf_counter()
        self.extra: dict = {}

    def write(self, text: str):
        if not self.out or self.out == "-":
            sys.stdout.write(text)
            return
        path = Path(self.out)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as fh:
            fh.write(text)
        self.files.append(str(path))

    def close(self):
        if not self.manifest_path:
            return
        echo = {k: v for k, v in self.settings.items() if k != "_defaulted"}
        manifest = {
            "command": self.command,
            "config": echo,
            "defaulted": self.settings.get("_defaulted", []),
            "config_digest": _config_digest(self.command, self.settings),
            "tool_version": __version__,
            "rng": RNG_ID,
            "wall_time_s": round(time.perf_counter() - self.started, 3),
            "outputs": self.files,
            **self.extra,
        }
        path = Path(self.manifest_path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(manifest, indent=2, sort_keys=True, default=str) + "\n")


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _json_text(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


# ----------------------------------------------------------------------------
# commands
# ----------------------------------------------------------------------------

def _analytic(fn, cfg):
    try:
        return fn(cfg), None
    except LosMimoError as exc:
        return None, str(exc)


def cmd_moments(args, s) -> tuple[int, dict | str]:
    cfg = mom.MomentConfig(int(s["ntx"]), int(s["nrx"]), float(s["kd"]), Axis(s["axis"]))
    doc = {
        "n_t": cfg.n_t, "n_r": cfg.n_r, "kd": cfg.kd, "axis": cfg.axis.value,
        "kd_defaulted": "kd" in s["_defaulted"],
        "ef11": mom.ef11(cfg),
        "ef12": mom.ef12(cfg),
        "mu_omega": mom.mu_omega(cfg),
        "expected_trace2": mom.expected_trace2(cfg),
    }
    reasons = {}
    for key, fn in (
        ("expected_trace3", mom.expected_trace3),
        ("var_f1nT", mom.var_f1nT),
        ("var_f1", mom.var_f1),
        ("cov_f_cross", mom.cov_f_cross),
        ("correlation_cf", mom.correlation_cf),
    ):
        doc[key], why = _analytic(fn, cfg)
        if why:
            reasons[key] = why
    if cfg.axis is Axis.Z:
        doc["trace3_terms"] = mom.trace3_terms(cfg)
    doc["unavailable"] = reasons
    return EXIT_OK, _json_text(doc)


def _parse_methods(text) -> list[OutageMethod]:
    items = [t.strip() for t in (text or "").split(",") if t.strip()]
    if not items:
        raise UsageError("at least one outage method is required")
    try:
        return [OutageMethod(t) for t in items]
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _grid(args, s, samples) -> np.ndarray:
    r_min = _extra(args, s, "r_min")
    r_max = _extra(args, s, "r_max")
    steps = int(_extra(args, s, "r_steps", 201))
    if r_min is None or r_max is None:
        auto = central_rate_grid(samples, steps=steps)
        r_min = auto[0] if r_min is None else r_min
        r_max = auto[-1] if r_max is None else r_max
    if r_max < r_min or steps < 1:
        raise UsageError("need r_min <= r_max and r_steps >= 1")
    return np.linspace(float(r_min), float(r_max), steps)


def _trace_moments(cfg: ExperimentConfig) -> tuple[TraceMoments, str]:
    mcfg = cfg.moment_config
    t2 = mom.expected_trace2(mcfg)
    try:
        return TraceMoments(t2, mom.expected_trace3(mcfg)), "analytic"
    except AnalyticFormUnavailable:
        t3 = run_statistics_mc(cfg, [Statistic.TRACE_W3])[Statistic.TRACE_W3].mean()
        return TraceMoments(t2, t3), "monte-carlo"


def _outage_rows(cfg, samples, grid, methods, notes: dict) -> list[tuple]:
    curves = {}
    for method in methods:
        if method is OutageMethod.EMPIRICAL:
            curves[method] = empirical_outage_probabilities(samples, grid)
        elif method is OutageMethod.GAUSSIAN_MC:
            curves[method] = outage_probabilities(gaussian_stats(samples, cfg.snr), grid)
        else:
            moments, src = _trace_moments(cfg)
            notes["trace3_source"] = src
            try:
                st = capacity_stats(cfg.snr, MomentSource.ANALYTIC_TAYLOR, moments=moments)
            except TaylorValidityError as exc:
                notes.setdefault("skipped_methods", {})[method.value] = str(exc)
                log.warning("skipping %s: %s", method.value, exc)
                continue
            curves[method] = outage_probabilities(st, grid)
    if not curves:
        raise TaylorValidityError("no requested outage method could be evaluated")
    if OutageMethod.GAUSSIAN_MC in curves and OutageMethod.EMPIRICAL in curves:
        notes["sup_gap_gaussian_mc_vs_empirical"] = float(
            np.max(np.abs(curves[OutageMethod.GAUSSIAN_MC] - curves[OutageMethod.EMPIRICAL]))
        )
    rows = []
    for i, r in enumerate(grid):
        for method in methods:
            if method in curves:
                rows.append((r, method.value, curves[method][i]))
    return rows


def cmd_outage(args, s, outputs: _Outputs):
    methods = _parse_methods(_extra(args, s, "methods", "gaussian-mc,empirical"))
    cfg = _experiment(s)
    samples = run_capacity_mc(cfg)
    grid = _grid(args, s, samples)
    notes = {}
    rows = _outage_rows(cfg, samples, grid, methods, notes)
    outputs.extra.update(notes)
    return EXIT_OK, _csv_text(
        ["r_th", "method", "p_out"], [(_fmt(r), m, _fmt(p)) for r, m, p in rows]
    )


def _parse_list(text, cast):
    if text is None:
        return None
    if isinstance(text, (list, tuple)):
        return [cast(t) for t in text]
    return [cast(t) for t in str(text).split(",") if t.strip()]


def _parse_pair(text) -> tuple[int, int]:
    if isinstance(text, (list, tuple)):
        return int(text[0]), int(text[1])
    a, b = str(text).lower().split("x")
    return int(a), int(b)


def cmd_sweep(args, s, outputs: _Outputs):
    methods = _parse_methods(_extra(args, s, "methods", "gaussian-mc,empirical"))
    snrs = _parse_list(_extra(args, s, "snr_list"), float) or [float(s["snr_db"])]
    pairs = _parse_list(_extra(args, s, "pairs"), _parse_pair) or [(int(s["ntx"]), int(s["nrx"]))]
    if not snrs or not pairs:
        raise UsageError("empty sweep")
    rows, cells = [], []
    for n_t, n_r in pairs:
        base = _experiment(s, n_t=n_t, n_r=n_r)
        sweep = run_capacity_sweep_mc(base, snrs)
        for snr_db in snrs:
            cfg = _experiment(s, n_t=n_t, n_r=n_r, snr_db=snr_db)
            samples = sweep[float(snr_db)]
            notes = {}
            grid = _grid(args, s, samples)
            for r, m, p in _outage_rows(cfg, samples, grid, methods, notes):
                rows.append((n_t, n_r, _fmt(snr_db), _fmt(r), m, _fmt(p)))
            cells.append({"n_t": n_t, "n_r": n_r, "snr_db": snr_db, **notes})
    outputs.extra["cells"] = cells
    return EXIT_OK, _csv_text(["n_t", "n_r", "snr_db", "r_th", "method", "p_out"], rows)


def cmd_capacity_mc(args, s, outputs: _Outputs):
    cfg = _experiment(s)
    samples = run_capacity_mc(cfg)
    st = gaussian_stats(samples, cfg.snr)
    outputs.extra["summary"] = {
        "mean": st.mean, "variance": st.variance, "std_error": samples.std_error(),
        "samples_digest": samples.digest(), "config_hash": samples.config_hash,
    }
    return EXIT_OK, _csv_text(
        ["trial", "capacity"], [(i, _fmt(v)) for i, v in enumerate(samples.values)]
    )


def cmd_cf(args, s, outputs: _Outputs):
    cfg = _experiment(s)
    mcfg = cfg.moment_config
    doc = {"n_t": cfg.n_t, "n_r": cfg.n_r, "kd": cfg.kd, "trials": cfg.trials}
    doc["correlation_cf"], why = _analytic(mom.correlation_cf, mcfg)
    doc["cov_f_cross"], why2 = _analytic(mom.cov_f_cross, mcfg)
    doc["shared_pair_covariance"], _ = _analytic(mom.shared_pair_covariance, mcfg)
    if why or why2:
        doc["unavailable"] = why or why2
    if cfg.n_t >= 2 and cfg.axis is Axis.Y:
        seps = list(range(1, min(3, cfg.n_t - 1) + 1))
        rows = run_f_rows_mc(cfg, [1] + [1 + n for n in seps])
        doc["mc_row_correlation"] = {
            str(n): float(np.corrcoef(rows[:, 0], rows[:, i + 1])[0, 1]) for i, n in enumerate(seps)
        }
        doc["mc_row_covariance_1_2"] = float(np.cov(rows[:, 0], rows[:, 1])[0, 1])
        if cfg.n_t >= 3:
            mc = run_statistics_mc(cfg, [Statistic.PAIR_1N, Statistic.PAIR_2N])
            a, b = mc[Statistic.PAIR_1N].values, mc[Statistic.PAIR_2N].values
            doc["mc_shared_pair_correlation"] = float(np.corrcoef(a, b)[0, 1])
            doc["mc_shared_pair_covariance"] = float(np.cov(a, b)[0, 1])
    return EXIT_OK, _json_text(doc)


def cmd_verify(args, s, outputs: _Outputs):
    skip = tuple(args.skip or ())
    unknown = set(skip) - set(verification.CHECK_GROUPS)
    if unknown:
        raise UsageError(f"unknown check groups: {sorted(unknown)}")
    report = verification.run_all(int(s["trials"]), int(s["seed"]), int(s["workers"]), skip)
    outputs.extra["passed"] = report["passed"]
    return (EXIT_OK if report["passed"] else EXIT_CHECK), _json_text(report)


# ----------------------------------------------------------------------------
# parser
# ----------------------------------------------------------------------------

def _common(p: argparse.ArgumentParser):
    p.add_argument("--ntx", type=int, help="number of satellites n_t (default 4)")
    p.add_argument("--nrx", type=int, help="receive elements n_r (default 4)")
    p.add_argument("--kd", type=float, help="wavenumber x spacing (default pi)")
    p.add_argument("--axis", choices=["y", "z"], help="array axis (default y)")
    p.add_argument("--snr-db", dest="snr_db", type=float, help="SNR in dB (default 10)")
    p.add_argument("--trials", type=int, help="Monte Carlo trials (default 100000)")
    p.add_argument("--seed", type=int, help="master seed (default 42)")
    p.add_argument("--workers", type=int, help="worker processes; output does not depend on it")
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--manifest", help="manifest path (default: <out>.manifest.json)")
    p.add_argument("--config", help="JSON file of defaults; flags override it")


def _grid_flags(p):
    p.add_argument("--r-min", dest="r_min", type=float)
    p.add_argument("--r-max", dest="r_max", type=float)
    p.add_argument("--r-steps", dest="r_steps", type=int)
    p.add_argument("--methods", help="comma list of gaussian-analytic, gaussian-mc, empirical")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="losmimo", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, help_ in (
        ("moments", "closed-form trace moments and F-row statistics (JSON)"),
        ("outage", "outage curve for one configuration (CSV)"),
        ("sweep", "outage curves over SNRs and array sizes (CSV)"),
        ("capacity-mc", "raw Monte Carlo capacity samples (CSV)"),
        ("cf", "C_F against simulated F-row correlations (JSON)"),
        ("verify", "run the oracle check suite (JSON report)"),
    ):
        p = sub.add_parser(name, help=help_)
        _common(p)
        if name in ("outage", "sweep"):
            _grid_flags(p)
        if name == "sweep":
            p.add_argument("--snr-list", dest="snr_list", help="comma list of SNRs in dB")
            p.add_argument("--pairs", help="comma list like 4x4,8x8")
        if name == "verify":
            p.add_argument("--skip", action="append", choices=verification.CHECK_GROUPS,
                           help="check group to skip (repeatable)")
    return parser


_COMMANDS = {
    "moments": lambda a, s, o: cmd_moments(a, s),
    "outage": cmd_outage,
    "sweep": cmd_sweep,
    "capacity-mc": cmd_capacity_mc,
    "cf": cmd_cf,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        settings = _settings(args)
        outputs = _Outputs(args.command, settings, args.out, args.manifest)
        code, text = _COMMANDS[args.command](args, settings, outputs)
        outputs.write(text)
        outputs.close()
        return code
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ArgumentError as exc:
        print(f"invalid arguments: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (LosMimoError, OSError, MemoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
