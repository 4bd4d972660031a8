"""Plain-text experiment configuration (key = value) with strict parsing.

An empty file yields the default scenario: N = M = 4 antennas, 3 paths
per side, wavelength 1.5 m, region A = 3 wavelengths, spacing D = half a
wavelength, noise power 15 dBm, per-path gain variance 1/L_r.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .evaluation import BaselineKind
from .params import PathAngles, SystemParams

__all__ = ["ExperimentSpec", "ConfigError", "parse_config", "EXPERIMENTS"]

EXPERIMENTS = ("convergence", "snr", "region")

DEFAULT_SNR_GRID_DB = tuple(np.arange(0.0, 15.0 + 1e-9, 2.5))
DEFAULT_REGION_GRID = tuple(np.arange(1.0, 3.5 + 1e-9, 0.25))
DEFAULT_PMAX_GRID_DBM = (20.0, 25.0, 30.0)
DEFAULT_REGION_SNR_DB = 10.0


class ConfigError(ValueError):
    """Invalid, unknown or inconsistent configuration input."""


@dataclass(frozen=True)
class ExperimentSpec:
    """Fully validated description of one experiment run."""

    experiment: str
    num_tx: int
    num_rx: int
    num_tx_paths: int
    num_rx_paths: int
    wavelength: float
    region_size_wavelengths: float
    min_spacing_wavelengths: float
    noise_power_dbm: float
    path_gain_variance: float
    p_max_grid_dbm: tuple
    snr_grid_db: tuple
    region_grid: tuple
    region_snr_db: float
    designs: tuple
    num_angle_trials: int
    base_seed: int
    num_samples: int
    angles: Optional[PathAngles]

    def system_params(self, p_max_dbm: float) -> SystemParams:
        return SystemParams.from_dbm(
            wavelength=self.wavelength,
            noise_power_dbm=self.noise_power_dbm,
            power_budget_dbm=p_max_dbm,
            num_tx_paths=self.num_tx_paths,
            num_rx_paths=self.num_rx_paths,
            path_gain_variance=self.path_gain_variance,
        )

    @property
    def region_half_width(self) -> float:
        return 0.5 * self.region_size_wavelengths * self.wavelength

    @property
    def min_spacing(self) -> float:
        return self.min_spacing_wavelengths * self.wavelength


def _read_pairs(path) -> dict:
    text = Path(path).read_text(encoding="utf-8")
    pairs: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        key = key.strip()
        if key in pairs:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        pairs[key] = value.strip()
    return pairs


def _get_int(pairs: dict, key: str, default: int, minimum: int = 1) -> int:
    if key not in pairs:
        return default
    try:
        value = int(pairs.pop(key))
    except ValueError as exc:
        raise ConfigError(f"key {key!r}: expected an integer") from exc
    if value < minimum:
        raise ConfigError(f"key {key!r}: must be >= {minimum}, got {value}")
    return value


def _get_float(pairs: dict, key: str, default, minimum=None, strict: bool = False):
    if key not in pairs:
        return default
    try:
        value = float(pairs.pop(key))
    except ValueError as exc:
        raise ConfigError(f"key {key!r}: expected a number") from exc
    if not np.isfinite(value):
        raise ConfigError(f"key {key!r}: must be finite")
    if minimum is not None and (value < minimum or (strict and value <= minimum)):
        cmp = ">" if strict else ">="
        raise ConfigError(f"key {key!r}: must be {cmp} {minimum}, got {value}")
    return value


def _get_float_list(pairs: dict, key: str):
    if key not in pairs:
        return None
    raw = pairs.pop(key)
    items = [s.strip() for s in raw.split(",") if s.strip()]
    if not items:
        raise ConfigError(f"key {key!r}: empty list")
    try:
        return tuple(float(s) for s in items)
    except ValueError as exc:
        raise ConfigError(f"key {key!r}: expected comma-separated numbers") from exc


def _get_designs(pairs: dict) -> tuple:
    if "designs" not in pairs:
        return (BaselineKind.FA, BaselineKind.RFA, BaselineKind.FPA)
    raw = pairs.pop("designs")
    out = []
    for item in raw.split(","):
        name = item.strip().lower()
        if not name:
            continue
        try:
            kind = BaselineKind(name)
        except ValueError as exc:
            raise ConfigError(
                f"key 'designs': unknown design {item.strip()!r} "
                f"(expected fa, rfa, fpa)"
            ) from exc
        if kind in out:
            raise ConfigError(f"key 'designs': duplicate design {name!r}")
        out.append(kind)
    if not out:
        raise ConfigError("key 'designs': empty list")
    return tuple(out)


def _get_angles(pairs: dict, num_tx_paths: int, num_rx_paths: int):
    keys = ("tx_elevation", "tx_azimuth", "rx_elevation", "rx_azimuth")
    present = [k for k in keys if k in pairs]
    if not present:
        return None
    if len(present) != len(keys):
        missing = sorted(set(keys) - set(present))
        raise ConfigError(f"angle lists must be given together; missing {missing}")
    values = {k: _get_float_list(pairs, k) for k in keys}
    for k in ("tx_elevation", "tx_azimuth"):
        if len(values[k]) != num_tx_paths:
            raise ConfigError(f"key {k!r}: expected {num_tx_paths} values")
    for k in ("rx_elevation", "rx_azimuth"):
        if len(values[k]) != num_rx_paths:
            raise ConfigError(f"key {k!r}: expected {num_rx_paths} values")
    try:
        return PathAngles(**values)
    except ValueError as exc:
        raise ConfigError(f"angle lists invalid: {exc}") from exc


def parse_config(path, experiment: str) -> ExperimentSpec:
    """Parse and validate a config file for the given experiment kind.

    Raises :class:`ConfigError` naming the offending key for a missing
    file, malformed value, unknown key or violated invariant.
    """
    if experiment not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {experiment!r}; expected {EXPERIMENTS}")
    if path is None:
        pairs: dict = {}
    else:
        p = Path(path)
        if not p.is_file():
            raise ConfigError(f"config file not found: {p}")
        pairs = _read_pairs(p)

    num_tx = _get_int(pairs, "N", 4)
    num_rx = _get_int(pairs, "M", 4)
    num_tx_paths = _get_int(pairs, "L_t", 3)
    num_rx_paths = _get_int(pairs, "L_r", 3)
    wavelength = _get_float(pairs, "wavelength", 1.5, minimum=0.0, strict=True)
    region = _get_float(pairs, "A", 3.0, minimum=0.0, strict=True)
    spacing = _get_float(pairs, "D", 0.5, minimum=0.0)
    sigma2_dbm = _get_float(pairs, "sigma2_dbm", 15.0)
    alpha2 = _get_float(pairs, "alpha2", 1.0 / num_rx_paths, minimum=0.0, strict=True)
    trials = _get_int(pairs, "trials", 100)
    seed = _get_int(pairs, "seed", 0, minimum=0)
    num_samples = _get_int(pairs, "num_samples", 10_000)
    designs = _get_designs(pairs)
    angles = _get_angles(pairs, num_tx_paths, num_rx_paths)

    snr_values = _get_float_list(pairs, "snr_db")
    p_max_values = _get_float_list(pairs, "p_max_dbm")
    if snr_values is not None and p_max_values is not None:
        raise ConfigError("specify 'snr_db' or 'p_max_dbm', not both")
    region_values = _get_float_list(pairs, "a_over_lambda")

    if pairs:
        unknown = ", ".join(sorted(pairs))
        raise ConfigError(f"unknown key(s): {unknown}")

    # per-experiment grid resolution
    p_max_grid = DEFAULT_PMAX_GRID_DBM
    snr_grid = DEFAULT_SNR_GRID_DB
    region_grid = DEFAULT_REGION_GRID
    region_snr = DEFAULT_REGION_SNR_DB
    if experiment == "convergence":
        if p_max_values is not None:
            p_max_grid = p_max_values
        elif snr_values is not None:
            p_max_grid = tuple(v + sigma2_dbm for v in snr_values)
        if region_values is not None:
            raise ConfigError("key 'a_over_lambda' only applies to the region experiment")
    elif experiment == "snr":
        if snr_values is not None:
            snr_grid = snr_values
        elif p_max_values is not None:
            snr_grid = tuple(v - sigma2_dbm for v in p_max_values)
        if region_values is not None:
            raise ConfigError("key 'a_over_lambda' only applies to the region experiment")
    else:  # region
        if region_values is not None:
            region_grid = region_values
        if any(v <= 0 for v in region_grid):
            raise ConfigError("key 'a_over_lambda': values must be > 0")
        if snr_values is not None:
            if len(snr_values) != 1:
                raise ConfigError(
                    "key 'snr_db': the region experiment takes a single value"
                )
            region_snr = snr_values[0]
        elif p_max_values is not None:
            if len(p_max_values) != 1:
                raise ConfigError(
                    "key 'p_max_dbm': the region experiment takes a single value"
                )
            region_snr = p_max_values[0] - sigma2_dbm

    return ExperimentSpec(
        experiment=experiment,
        num_tx=num_tx,
        num_rx=num_rx,
        num_tx_paths=num_tx_paths,
        num_rx_paths=num_rx_paths,
        wavelength=wavelength,
        region_size_wavelengths=region,
        min_spacing_wavelengths=spacing,
        noise_power_dbm=sigma2_dbm,
        path_gain_variance=alpha2,
        p_max_grid_dbm=tuple(p_max_grid),
        snr_grid_db=tuple(snr_grid),
        region_grid=tuple(region_grid),
        region_snr_db=region_snr,
        designs=designs,
        num_angle_trials=trials,
        base_seed=seed,
        num_samples=num_samples,
        angles=angles,
    )
