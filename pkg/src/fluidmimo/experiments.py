"""Seeded experiment runners producing deterministic CSV outputs.

Trial k draws its angle and Monte Carlo streams from separate substreams
of ``SeedSequence(base_seed + k)``, so the angle realization of a trial
never depends on the experiment grid, the design, or the number of Monte
Carlo samples. Rows are assembled fully in memory and written in one
pass, so a failed run leaves no partial CSV behind.
"""

from __future__ import annotations

import math
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from typing import NamedTuple, Optional

import numpy as np

from .config import ExperimentSpec
from .evaluation import (
    BaselineKind,
    build_baseline_layout,
    ergodic_rate_mc,
    relative_gain,
    uniform_linear_array,
)
from .optimizer import SolveTrace, SolverConfig, alternate_optimize
from .params import PathAngles

__all__ = [
    "ExperimentError",
    "TrialRecord",
    "CONVERGENCE_HEADER",
    "SNR_HEADER",
    "REGION_HEADER",
    "run_convergence",
    "run_snr_sweep",
    "run_region_sweep",
    "run_experiment",
    "write_csv",
    "relative_gain",
]

CONVERGENCE_HEADER = ("p_max_dbm", "seed", "iteration", "rate_bound")
SNR_HEADER = ("design", "snr_db", "num_trials", "mean_rate", "std_error", "mean_upper_bound")
REGION_HEADER = ("design", "a_over_lambda", "num_trials", "mean_rate", "std_error", "mean_upper_bound")

MONOTONE_SLACK = 1e-9
JOBS_ENV_VAR = "FLUID_MIMO_MAX_JOBS"


class ExperimentError(RuntimeError):
    """A per-run invariant failed while executing an experiment."""


class TrialRecord(NamedTuple):
    """One evaluated (design, point, trial) before aggregation."""

    design: str
    snr_db: float
    a_over_lambda: Optional[float]
    seed: int
    mean_rate: float
    std_error: float
    upper_bound: float


def _trial_streams(base_seed: int, trial: int):
    angle_ss, mc_ss = np.random.SeedSequence(base_seed + trial).spawn(2)
    return angle_ss, mc_ss


def _trial_angles(spec: ExperimentSpec, angle_ss) -> PathAngles:
    if spec.angles is not None:
        return spec.angles
    rng = np.random.default_rng(angle_ss)
    return PathAngles.random(spec.num_tx_paths, spec.num_rx_paths, rng)


def _ula_extent(count: int, wavelength: float, min_spacing: float) -> float:
    spacing = max(wavelength / 2.0, min_spacing)
    return float(np.abs(uniform_linear_array(count, spacing)[:, 0]).max(initial=0.0))


def _design_layout(spec: ExperimentSpec, kind: BaselineKind, params, half_width: float):
    """Initial layout; frozen ULA sides get their region widened to fit.

    The movement region only constrains antennas that actually move, so a
    fixed array longer than the region is recorded with a box just large
    enough to contain it.
    """
    spacing = spec.min_spacing
    tx_hw = half_width
    rx_hw = half_width
    if not kind.moves_tx:
        tx_hw = max(half_width, _ula_extent(spec.num_tx, spec.wavelength, spacing))
    if not kind.moves_rx:
        rx_hw = max(half_width, _ula_extent(spec.num_rx, spec.wavelength, spacing))
    return build_baseline_layout(
        kind,
        spec.num_tx,
        spec.num_rx,
        params,
        half_width,
        spacing,
        tx_region_half_width=tx_hw,
        rx_region_half_width=rx_hw,
    )


def _check_trace(trace: SolveTrace) -> None:
    values = trace.objective_per_outer_iter
    if not all(math.isfinite(v) for v in values):
        raise ExperimentError("optimizer produced a non-finite objective")
    for prev, cur in zip(values, values[1:]):
        if cur < prev - MONOTONE_SLACK:
            raise ExperimentError(
                f"objective decreased from {prev!r} to {cur!r} during a run"
            )


def _optimize_trial(spec, kind, p_max_dbm, half_width, angles, config):
    params = spec.system_params(p_max_dbm)
    layout = _design_layout(spec, kind, params, half_width)
    trace = alternate_optimize(
        layout,
        angles,
        params,
        config,
        optimize_tx=kind.moves_tx,
        optimize_rx=kind.moves_rx,
    )
    _check_trace(trace)
    return params, trace


def _convergence_task(payload):
    spec, config, p_max_dbm, trial = payload
    angle_ss, _ = _trial_streams(spec.base_seed, trial)
    angles = _trial_angles(spec, angle_ss)
    _, trace = _optimize_trial(
        spec, BaselineKind.FA, p_max_dbm, spec.region_half_width, angles, config
    )
    return trace.objective_per_outer_iter


def _sweep_task(payload) -> TrialRecord:
    spec, config, p_max_dbm, half_width, kind_value, trial = payload
    kind = BaselineKind(kind_value)
    angle_ss, mc_ss = _trial_streams(spec.base_seed, trial)
    angles = _trial_angles(spec, angle_ss)
    params, trace = _optimize_trial(spec, kind, p_max_dbm, half_width, angles, config)
    bound = trace.objective_per_outer_iter[-1]
    estimate = ergodic_rate_mc(
        trace.final_layout,
        angles,
        trace.final_covariance,
        params,
        num_samples=spec.num_samples,
        seed=mc_ss,
    )
    if estimate.mean_rate - 3.0 * estimate.std_error > bound:
        raise ExperimentError(
            f"Monte Carlo rate {estimate.mean_rate:.6g} exceeds the deterministic "
            f"bound {bound:.6g} by more than 3 standard errors"
        )
    return TrialRecord(
        design=kind.value,
        snr_db=p_max_dbm - spec.noise_power_dbm,
        a_over_lambda=2.0 * half_width / spec.wavelength,
        seed=spec.base_seed + trial,
        mean_rate=estimate.mean_rate,
        std_error=estimate.std_error,
        upper_bound=bound,
    )


def _resolve_jobs(jobs: int) -> int:
    jobs = max(1, int(jobs))
    cap = os.environ.get(JOBS_ENV_VAR)
    if cap is not None:
        try:
            jobs = min(jobs, max(1, int(cap)))
        except ValueError:
            raise ExperimentError(f"{JOBS_ENV_VAR} must be an integer, got {cap!r}")
    return jobs


def _run_tasks(task, payloads, jobs: int):
    jobs = _resolve_jobs(jobs)
    if jobs == 1 or len(payloads) <= 1:
        return [task(p) for p in payloads]
    chunk = max(1, len(payloads) // (4 * jobs))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(task, payloads, chunksize=chunk))


def run_convergence(spec: ExperimentSpec, jobs: int = 1, config: SolverConfig | None = None):
    """Objective trace per (power budget, seed); rows sorted by grid order."""
    config = config or SolverConfig()
    payloads = [
        (spec, config, p_max, trial)
        for p_max in spec.p_max_grid_dbm
        for trial in range(spec.num_angle_trials)
    ]
    traces = _run_tasks(_convergence_task, payloads, jobs)
    rows = []
    for (_, _, p_max, trial), values in zip(payloads, traces):
        seed = spec.base_seed + trial
        for iteration, value in enumerate(values):
            rows.append((p_max, seed, iteration, value))
    return CONVERGENCE_HEADER, rows


def _aggregate(records, trials: int):
    means = np.array([r.mean_rate for r in records])
    bounds = np.array([r.upper_bound for r in records])
    mean_rate = float(means.mean())
    if trials > 1:
        std_error = float(means.std(ddof=1) / np.sqrt(trials))
    else:
        std_error = float(records[0].std_error)
    return mean_rate, std_error, float(bounds.mean())


def run_snr_sweep(spec: ExperimentSpec, jobs: int = 1, config: SolverConfig | None = None):
    """Trial-averaged rates per (design, SNR point)."""
    config = config or SolverConfig()
    half_width = spec.region_half_width
    points = [
        (snr_db, kind) for snr_db in spec.snr_grid_db for kind in spec.designs
    ]
    payloads = [
        (spec, config, snr_db + spec.noise_power_dbm, half_width, kind.value, trial)
        for snr_db, kind in points
        for trial in range(spec.num_angle_trials)
    ]
    results = _run_tasks(_sweep_task, payloads, jobs)
    rows = []
    trials = spec.num_angle_trials
    for i, (snr_db, kind) in enumerate(points):
        chunk = results[i * trials : (i + 1) * trials]
        mean_rate, std_error, mean_bound = _aggregate(chunk, trials)
        rows.append((kind.value, snr_db, trials, mean_rate, std_error, mean_bound))
    return SNR_HEADER, rows


def run_region_sweep(spec: ExperimentSpec, jobs: int = 1, config: SolverConfig | None = None):
    """Trial-averaged rates per (design, region size) at the fixed SNR point."""
    config = config or SolverConfig()
    p_max_dbm = spec.region_snr_db + spec.noise_power_dbm
    points = [
        (a_over_lambda, kind)
        for a_over_lambda in spec.region_grid
        for kind in spec.designs
    ]
    payloads = [
        (
            spec,
            config,
            p_max_dbm,
            0.5 * a_over_lambda * spec.wavelength,
            kind.value,
            trial,
        )
        for a_over_lambda, kind in points
        for trial in range(spec.num_angle_trials)
    ]
    results = _run_tasks(_sweep_task, payloads, jobs)
    rows = []
    trials = spec.num_angle_trials
    for i, (a_over_lambda, kind) in enumerate(points):
        chunk = results[i * trials : (i + 1) * trials]
        mean_rate, std_error, mean_bound = _aggregate(chunk, trials)
        rows.append((kind.value, a_over_lambda, trials, mean_rate, std_error, mean_bound))
    return REGION_HEADER, rows


_RUNNERS = {
    "convergence": run_convergence,
    "snr": run_snr_sweep,
    "region": run_region_sweep,
}


def run_experiment(spec: ExperimentSpec, jobs: int = 1, config: SolverConfig | None = None):
    """Dispatch on ``spec.experiment``; returns (header, rows)."""
    return _RUNNERS[spec.experiment](spec, jobs=jobs, config=config)


def _format_value(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    value = float(value)
    if not math.isfinite(value):
        raise ExperimentError("refusing to write a non-finite value to CSV")
    return repr(value)


def write_csv(path, header, rows) -> None:
    """Write rows atomically (temp file + rename); RFC-4180 style, UTF-8."""
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_format_value(v) for v in row))
    text = "\n".join(lines) + "\n"
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".csv.tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
