"""Far-field geometric channel model and the deterministic rate bound.

An antenna at planar position (x, y) contributes, on each propagation
path, a pure phase shift proportional to the projection of its position
onto the path's arrival/departure direction. Collecting those unit-modulus
phases per path gives the field response vectors/matrices; the channel is
assembled from them and the origin-to-origin path response matrix.

Averaging the instantaneous log-det rate over the isotropic path gains
and moving the expectation inside the concave log-det yields the
deterministic objective evaluated by :func:`upper_bound_rate`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import AntennaLayout, PathAngles, SystemParams
from .validation import check_covariance, check_finite

__all__ = [
    "TransmitCovariance",
    "propagation_delta",
    "path_directions",
    "tx_field_vector",
    "rx_field_vector",
    "field_matrices",
    "assemble_channel",
    "jensen_expectation",
    "bound_coefficient",
    "upper_bound_rate",
]


@dataclass(frozen=True)
class TransmitCovariance:
    """Hermitian PSD transmit covariance with a trace budget.

    Validated on construction: Hermitian within 1e-10, smallest eigenvalue
    >= -1e-10 * trace, trace <= power_budget within 1e-9 relative slack.
    """

    matrix: np.ndarray
    power_budget: float

    def __post_init__(self) -> None:
        q = check_covariance(self.matrix, self.power_budget)
        q = q.copy()
        q.flags.writeable = False
        object.__setattr__(self, "matrix", q)

    @property
    def num_tx(self) -> int:
        return self.matrix.shape[0]

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)


def path_directions(elevation: np.ndarray, azimuth: np.ndarray) -> np.ndarray:
    """Unit-bounded projection directions, one row (sin(e)cos(a), cos(e)) per path."""
    return np.stack(
        [np.sin(elevation) * np.cos(azimuth), np.cos(elevation)], axis=-1
    )


def propagation_delta(position, elevation, azimuth):
    """Signed propagation distance difference vs. the region origin.

    For position (x, y) and a path with elevation ``elevation`` and azimuth
    ``azimuth`` this is x*sin(e)*cos(a) + y*cos(e). Broadcasts over arrays
    of angles.
    """
    x, y = position
    return x * np.sin(elevation) * np.cos(azimuth) + y * np.cos(elevation)


def _field_matrix(
    positions: np.ndarray, directions: np.ndarray, wavelength: float
) -> np.ndarray:
    """Phase matrix exp(j*2pi/lambda * d_l . p_k), shape (num_paths, num_antennas)."""
    phases = (2.0 * np.pi / wavelength) * (directions @ positions.T)
    return np.exp(1j * phases)


def tx_field_vector(
    position, angles: PathAngles, params: SystemParams
) -> np.ndarray:
    """Unit-modulus per-path phase vector of one transmit antenna (length L_t)."""
    pos = np.asarray(position, dtype=float).reshape(1, 2)
    dirs = path_directions(angles.tx_elevation, angles.tx_azimuth)
    return _field_matrix(pos, dirs, params.wavelength)[:, 0]


def rx_field_vector(
    position, angles: PathAngles, params: SystemParams
) -> np.ndarray:
    """Unit-modulus per-path phase vector of one receive antenna (length L_r)."""
    pos = np.asarray(position, dtype=float).reshape(1, 2)
    dirs = path_directions(angles.rx_elevation, angles.rx_azimuth)
    return _field_matrix(pos, dirs, params.wavelength)[:, 0]


def field_matrices(
    layout: AntennaLayout, angles: PathAngles, params: SystemParams
) -> tuple[np.ndarray, np.ndarray]:
    """Field response matrices (G, F); column k is the k-th antenna's vector."""
    tx_dirs = path_directions(angles.tx_elevation, angles.tx_azimuth)
    rx_dirs = path_directions(angles.rx_elevation, angles.rx_azimuth)
    g = _field_matrix(layout.tx_positions, tx_dirs, params.wavelength)
    f = _field_matrix(layout.rx_positions, rx_dirs, params.wavelength)
    return g, f


def assemble_channel(
    g: np.ndarray, f: np.ndarray, sigma: np.ndarray
) -> np.ndarray:
    """Channel matrix H = F^H Sigma G of shape (num_rx, num_tx).

    ``sigma`` holds the origin-to-origin complex gains coupling each
    transmit path (column) to each receive path (row).
    """
    g = np.asarray(g)
    f = np.asarray(f)
    sigma = np.asarray(sigma)
    if sigma.ndim != 2:
        raise ValueError("path response matrix must be 2-D")
    num_rx_paths, num_tx_paths = sigma.shape
    if f.shape[0] != num_rx_paths:
        raise ValueError(
            f"F has {f.shape[0]} path rows, path response matrix has {num_rx_paths}"
        )
    if g.shape[0] != num_tx_paths:
        raise ValueError(
            f"G has {g.shape[0]} path rows, path response matrix has {num_tx_paths}"
        )
    return f.conj().T @ sigma @ g


def jensen_expectation(
    p: np.ndarray, path_gain_variance: float, num_rx_paths: int
) -> np.ndarray:
    """Closed form of E{Sigma P Sigma^H} for i.i.d. zero-mean gains.

    For a Hermitian P and entries of variance ``path_gain_variance`` the
    expectation collapses to tr(P) * variance * I.
    """
    p = np.asarray(p)
    trace = np.trace(p).real
    return trace * path_gain_variance * np.eye(num_rx_paths)


def bound_coefficient(g: np.ndarray, q: np.ndarray, params: SystemParams) -> float:
    """Scalar a = (variance / noise) * tr(G Q G^H) scaling the bound's Gram term."""
    gq = g @ q
    trace = float(np.einsum("ij,ij->", gq, g.conj()).real)
    return params.path_gain_variance / params.noise_power * trace


def _logdet_rate(a: float, f: np.ndarray, log_base: float) -> float:
    """log_base det(I + a F^H F) via Cholesky of the Hermitian PD matrix."""
    if not np.isfinite(a):
        raise ValueError("bound coefficient is non-finite")
    m = f.shape[1]
    s = np.eye(m) + a * (f.conj().T @ f)
    try:
        chol = np.linalg.cholesky(s)
    except np.linalg.LinAlgError as exc:
        raise ValueError(
            "I + a F^H F is not positive definite; covariance PSD invariant broken"
        ) from exc
    return float(2.0 * np.sum(np.log(np.diagonal(chol).real)) / np.log(log_base))


def upper_bound_rate(
    layout: AntennaLayout,
    angles: PathAngles,
    covariance,
    params: SystemParams,
) -> float:
    """Deterministic rate bound for a layout/covariance pair, in bits/s/Hz.

    Evaluates log2 det(I + (variance/noise) * tr(G Q G^H) * F^H F). The
    expectation over the path gains is already folded in, so the value is
    a pure function of the geometry and the covariance.
    """
    q = covariance.matrix if isinstance(covariance, TransmitCovariance) else np.asarray(
        covariance, dtype=complex
    )
    check_finite(q, "covariance")
    g, f = field_matrices(layout, angles, params)
    a = bound_coefficient(g, q, params)
    return _logdet_rate(a, f, params.log_base)
