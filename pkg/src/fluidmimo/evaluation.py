"""Monte Carlo ergodic-rate evaluation, baseline layouts and gain metrics.

The true ergodic rate averages the instantaneous log-det rate over draws
of the path response matrix; the deterministic bound from
:mod:`fluidmimo.channel` upper-bounds it, and experiments report both so
the gap stays visible.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .channel import TransmitCovariance, field_matrices
from .params import AntennaLayout, PathAngles, SystemParams

__all__ = [
    "BaselineKind",
    "ErgodicRateEstimate",
    "sample_path_matrix",
    "ergodic_rate_mc",
    "uniform_linear_array",
    "initial_fluid_positions",
    "build_baseline_layout",
    "relative_gain",
]


class BaselineKind(str, Enum):
    """System design under comparison.

    FA optimizes both sides' positions, RFA keeps the transmit side a
    fixed uniform linear array and moves only the receive antennas, FPA
    fixes both sides and only adapts the transmit covariance.
    """

    FA = "fa"
    RFA = "rfa"
    FPA = "fpa"

    @property
    def moves_tx(self) -> bool:
        return self is BaselineKind.FA

    @property
    def moves_rx(self) -> bool:
        return self is not BaselineKind.FPA


@dataclass(frozen=True)
class ErgodicRateEstimate:
    """Sample mean/standard error of the Monte Carlo rate."""

    mean_rate: float
    std_error: float
    num_samples: int
    seed: object

    def __post_init__(self) -> None:
        if self.num_samples < 1:
            raise ValueError("num_samples must be >= 1")
        if self.std_error < 0:
            raise ValueError("std_error must be >= 0")


def sample_path_matrix(params: SystemParams, rng: np.random.Generator) -> np.ndarray:
    """One draw of the path response matrix, i.i.d. CN(0, variance) entries."""
    return sample_path_matrices(params, rng, 1)[0]


def sample_path_matrices(
    params: SystemParams, rng: np.random.Generator, count: int
) -> np.ndarray:
    """Batch of ``count`` path response matrices, shape (count, L_r, L_t)."""
    shape = (count, params.num_rx_paths, params.num_tx_paths)
    scale = np.sqrt(params.path_gain_variance / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def ergodic_rate_mc(
    layout: AntennaLayout,
    angles: PathAngles,
    covariance,
    params: SystemParams,
    num_samples: int = 10_000,
    seed=0,
) -> ErgodicRateEstimate:
    """Monte Carlo estimate of the ergodic rate, deterministic per seed."""
    if num_samples < 1:
        raise ValueError("num_samples must be >= 1")
    q = covariance.matrix if isinstance(covariance, TransmitCovariance) else np.asarray(
        covariance, dtype=complex
    )
    rng = np.random.default_rng(seed)
    g, f = field_matrices(layout, angles, params)
    sigmas = sample_path_matrices(params, rng, num_samples)
    h = np.einsum("qm,sqp,pn->smn", f.conj(), sigmas, g)
    hq = h @ q
    gram = np.einsum("smn,skn->smk", hq, h.conj())
    num_rx = f.shape[1]
    x = np.eye(num_rx) + gram / params.noise_power
    _, logdet = np.linalg.slogdet(x)
    rates = logdet / np.log(params.log_base)
    mean = float(rates.mean())
    std_error = (
        float(rates.std(ddof=1) / np.sqrt(num_samples)) if num_samples > 1 else 0.0
    )
    return ErgodicRateEstimate(
        mean_rate=mean, std_error=std_error, num_samples=num_samples, seed=seed
    )


def uniform_linear_array(count: int, spacing: float) -> np.ndarray:
    """Collinear positions along the x-axis, centered at the origin."""
    x = (np.arange(count) - (count - 1) / 2.0) * spacing
    return np.column_stack([x, np.zeros(count)])


def _centered_grid(
    count: int, half_width: float, min_spacing: float, wavelength: float
) -> np.ndarray:
    """Square grid fallback when the linear array exceeds the region."""
    if count == 1:
        return np.zeros((1, 2))
    k = int(np.ceil(np.sqrt(count)))
    spacing = min(max(wavelength / 2.0, min_spacing), 2.0 * half_width / (k - 1))
    if spacing < min_spacing:
        raise ValueError(
            f"region half-width {half_width:.6g} cannot hold {count} antennas "
            f"at spacing {min_spacing:.6g}"
        )
    axis = (np.arange(k) - (k - 1) / 2.0) * spacing
    xx, yy = np.meshgrid(axis, axis)
    return np.column_stack([xx.ravel(), yy.ravel()])[:count]


def initial_fluid_positions(
    count: int, half_width: float, min_spacing: float, wavelength: float
) -> np.ndarray:
    """Default optimizer initialization: half-wavelength linear array when it
    fits the region box, otherwise a centered grid."""
    spacing = max(wavelength / 2.0, min_spacing)
    ula = uniform_linear_array(count, spacing)
    if np.abs(ula[:, 0]).max(initial=0.0) <= half_width:
        return ula
    return _centered_grid(count, half_width, min_spacing, wavelength)


def build_baseline_layout(
    kind: BaselineKind | str,
    num_tx: int,
    num_rx: int,
    params: SystemParams,
    region_half_width: float,
    min_spacing: float,
    tx_region_half_width: float | None = None,
    rx_region_half_width: float | None = None,
) -> AntennaLayout:
    """Starting layout for the given design.

    Fixed sides (FPA both, RFA transmit) get a half-wavelength uniform
    linear array and fail with a configuration error when it exceeds the
    region; fluid sides get the optimizer's default initialization.
    """
    kind = BaselineKind(kind)
    tx_hw = region_half_width if tx_region_half_width is None else tx_region_half_width
    rx_hw = region_half_width if rx_region_half_width is None else rx_region_half_width
    spacing = max(params.wavelength / 2.0, min_spacing)

    def fixed_side(count: int, half_width: float) -> np.ndarray:
        ula = uniform_linear_array(count, spacing)
        if np.abs(ula[:, 0]).max(initial=0.0) > half_width:
            raise ValueError(
                f"region of half-width {half_width:.6g} is too small for a "
                f"{count}-element array at spacing {spacing:.6g}"
            )
        return ula

    if kind.moves_tx:
        tx = initial_fluid_positions(num_tx, tx_hw, min_spacing, params.wavelength)
    else:
        tx = fixed_side(num_tx, tx_hw)
    if kind.moves_rx:
        rx = initial_fluid_positions(num_rx, rx_hw, min_spacing, params.wavelength)
    else:
        rx = fixed_side(num_rx, rx_hw)

    return AntennaLayout(
        tx_positions=tx,
        rx_positions=rx,
        tx_region_half_width=tx_hw,
        rx_region_half_width=rx_hw,
        min_spacing=min_spacing,
    )


def relative_gain(rate_a: float, rate_b: float) -> float:
    """Percentage improvement of ``rate_a`` over the baseline ``rate_b``."""
    if not rate_b > 0:
        raise ValueError(f"baseline rate must be > 0, got {rate_b}")
    return 100.0 * (rate_a - rate_b) / rate_b
