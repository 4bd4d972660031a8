"""Scenario data model: system constants, path angles, antenna layouts.

All values are stored in linear units (meters, milliwatts). dBm/dB inputs
are converted at construction time; only the ratio of power budget to
noise power affects rates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .validation import (
    as_angle_array,
    as_position_array,
    check_layout_feasible,
)

__all__ = [
    "SystemParams",
    "PathAngles",
    "AntennaLayout",
    "Scenario",
    "dbm_to_mw",
    "db_to_linear",
]


def dbm_to_mw(value_dbm: float) -> float:
    """Convert a dBm power level to linear milliwatts."""
    return float(10.0 ** (value_dbm / 10.0))


def db_to_linear(value_db: float) -> float:
    """Convert a dB ratio to a linear ratio."""
    return float(10.0 ** (value_db / 10.0))


@dataclass(frozen=True)
class SystemParams:
    """Scenario constants shared by the channel model and the optimizer.

    Attributes
    ----------
    wavelength : float
        Carrier wavelength in meters.
    noise_power : float
        Noise power in linear milliwatts.
    power_budget : float
        Transmit power budget in linear milliwatts.
    num_tx_paths, num_rx_paths : int
        Number of departure / arrival propagation paths.
    path_gain_variance : float
        Per-entry variance of the complex path gains.
    log_base : float
        Base of the logarithm used for rates (2.0 -> bits/s/Hz).
    """

    wavelength: float
    noise_power: float
    power_budget: float
    num_tx_paths: int
    num_rx_paths: int
    path_gain_variance: float
    log_base: float = 2.0

    def __post_init__(self) -> None:
        if not self.wavelength > 0:
            raise ValueError(f"wavelength must be > 0, got {self.wavelength}")
        if not self.noise_power > 0:
            raise ValueError(f"noise_power must be > 0, got {self.noise_power}")
        if not self.power_budget > 0:
            raise ValueError(f"power_budget must be > 0, got {self.power_budget}")
        if self.num_tx_paths < 1 or self.num_rx_paths < 1:
            raise ValueError("path counts must be >= 1")
        if not self.path_gain_variance > 0:
            raise ValueError("path_gain_variance must be > 0")
        if not self.log_base > 1:
            raise ValueError("log_base must be > 1")

    @classmethod
    def from_dbm(
        cls,
        wavelength: float,
        noise_power_dbm: float,
        power_budget_dbm: float,
        num_tx_paths: int,
        num_rx_paths: int,
        path_gain_variance: Optional[float] = None,
    ) -> "SystemParams":
        """Build params from dBm power levels.

        When ``path_gain_variance`` is omitted it defaults to
        ``1 / num_rx_paths`` so the total receive-path power is normalized.
        """
        if path_gain_variance is None:
            path_gain_variance = 1.0 / num_rx_paths
        return cls(
            wavelength=wavelength,
            noise_power=dbm_to_mw(noise_power_dbm),
            power_budget=dbm_to_mw(power_budget_dbm),
            num_tx_paths=num_tx_paths,
            num_rx_paths=num_rx_paths,
            path_gain_variance=path_gain_variance,
        )

    @property
    def snr(self) -> float:
        """Linear ratio of the power budget to the noise power."""
        return self.power_budget / self.noise_power


@dataclass(frozen=True)
class PathAngles:
    """Elevation/azimuth angles of the departure and arrival paths.

    All angles are in radians and restricted to [0, pi]. The far-field
    geometry only enters the model through these angles; they do not
    depend on antenna positions.
    """

    tx_elevation: np.ndarray
    tx_azimuth: np.ndarray
    rx_elevation: np.ndarray
    rx_azimuth: np.ndarray

    def __post_init__(self) -> None:
        for name in ("tx_elevation", "tx_azimuth", "rx_elevation", "rx_azimuth"):
            object.__setattr__(self, name, as_angle_array(getattr(self, name), name))
        if self.tx_elevation.shape != self.tx_azimuth.shape:
            raise ValueError("tx_elevation and tx_azimuth must have equal length")
        if self.rx_elevation.shape != self.rx_azimuth.shape:
            raise ValueError("rx_elevation and rx_azimuth must have equal length")

    @property
    def num_tx_paths(self) -> int:
        return self.tx_elevation.size

    @property
    def num_rx_paths(self) -> int:
        return self.rx_elevation.size

    @classmethod
    def random(
        cls, num_tx_paths: int, num_rx_paths: int, rng: np.random.Generator
    ) -> "PathAngles":
        """Draw all angles i.i.d. uniform on [0, pi]."""
        return cls(
            tx_elevation=rng.uniform(0.0, np.pi, num_tx_paths),
            tx_azimuth=rng.uniform(0.0, np.pi, num_tx_paths),
            rx_elevation=rng.uniform(0.0, np.pi, num_rx_paths),
            rx_azimuth=rng.uniform(0.0, np.pi, num_rx_paths),
        )


@dataclass(frozen=True)
class AntennaLayout:
    """2-D positions of the transmit and receive antennas.

    Each side moves inside its own square region [-half_width, half_width]^2
    and keeps a minimum pairwise spacing ``min_spacing`` to limit mutual
    coupling. The two regions may differ in size; experiments use equal ones.
    """

    tx_positions: np.ndarray
    rx_positions: np.ndarray
    tx_region_half_width: float
    rx_region_half_width: float
    min_spacing: float

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "tx_positions", as_position_array(self.tx_positions, "tx_positions")
        )
        object.__setattr__(
            self, "rx_positions", as_position_array(self.rx_positions, "rx_positions")
        )
        if self.min_spacing < 0:
            raise ValueError("min_spacing must be >= 0")
        check_layout_feasible(
            self.tx_positions, self.tx_region_half_width, self.min_spacing, "tx"
        )
        check_layout_feasible(
            self.rx_positions, self.rx_region_half_width, self.min_spacing, "rx"
        )

    @property
    def num_tx(self) -> int:
        return self.tx_positions.shape[0]

    @property
    def num_rx(self) -> int:
        return self.rx_positions.shape[0]

    def replace_positions(
        self,
        tx_positions: Optional[np.ndarray] = None,
        rx_positions: Optional[np.ndarray] = None,
    ) -> "AntennaLayout":
        """Return a new layout with one or both sides replaced (re-validated)."""
        return AntennaLayout(
            tx_positions=self.tx_positions if tx_positions is None else tx_positions,
            rx_positions=self.rx_positions if rx_positions is None else rx_positions,
            tx_region_half_width=self.tx_region_half_width,
            rx_region_half_width=self.rx_region_half_width,
            min_spacing=self.min_spacing,
        )


@dataclass(frozen=True)
class Scenario:
    """One optimization instance: constants, geometry and movement regions.

    ``region_half_width`` is A/2 in meters (both sides use the same A here);
    ``initial_layout`` overrides the default centered-array initialization.
    """

    params: SystemParams
    angles: PathAngles
    region_half_width: float
    min_spacing: float
    num_tx: int = 4
    num_rx: int = 4
    initial_layout: Optional[AntennaLayout] = field(default=None)

    def __post_init__(self) -> None:
        if self.angles.num_tx_paths != self.params.num_tx_paths:
            raise ValueError("angles.num_tx_paths does not match params")
        if self.angles.num_rx_paths != self.params.num_rx_paths:
            raise ValueError("angles.num_rx_paths does not match params")
        if self.num_tx < 1 or self.num_rx < 1:
            raise ValueError("antenna counts must be >= 1")
        if not self.region_half_width > 0:
            raise ValueError("region_half_width must be > 0")
        if self.initial_layout is not None:
            if (
                self.initial_layout.num_tx != self.num_tx
                or self.initial_layout.num_rx != self.num_rx
            ):
                raise ValueError("initial_layout antenna counts do not match scenario")
