"""Input validation helpers shared by the data model and the estimator."""

from __future__ import annotations

import numpy as np

__all__ = [
    "as_angle_array",
    "as_position_array",
    "check_layout_feasible",
    "check_covariance",
    "check_finite",
    "pairwise_min_distance",
]

# Absolute slack for feasibility checks; matches the optimizer's guarantee
# that spacing never drops more than 1e-9 below the required minimum.
FEASIBILITY_ATOL = 1e-9

HERMITIAN_ATOL = 1e-10
PSD_RTOL = 1e-10
TRACE_RTOL = 1e-9


def as_angle_array(values, name: str) -> np.ndarray:
    """Coerce to a read-only 1-D float array of angles in [0, pi]."""
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError(f"{name} must be a non-empty 1-D array")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    if np.any(arr < 0.0) or np.any(arr > np.pi):
        raise ValueError(f"{name} must lie in [0, pi]")
    arr = arr.copy()
    arr.flags.writeable = False
    return arr


def as_position_array(values, name: str) -> np.ndarray:
    """Coerce to a read-only (k, 2) float array of planar coordinates."""
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] < 1:
        raise ValueError(f"{name} must have shape (k, 2) with k >= 1")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    arr = arr.copy()
    arr.flags.writeable = False
    return arr


def pairwise_min_distance(positions: np.ndarray) -> float:
    """Smallest pairwise Euclidean distance; inf for a single point."""
    n = positions.shape[0]
    if n < 2:
        return np.inf
    diff = positions[:, None, :] - positions[None, :, :]
    dist = np.sqrt(np.sum(diff * diff, axis=-1))
    dist[np.diag_indices(n)] = np.inf
    return float(dist.min())


def check_layout_feasible(
    positions: np.ndarray,
    half_width: float,
    min_spacing: float,
    side: str,
    atol: float = FEASIBILITY_ATOL,
) -> None:
    """Raise ValueError if positions leave the box or violate the spacing."""
    if not half_width > 0:
        raise ValueError(f"{side} region half-width must be > 0")
    if np.any(np.abs(positions) > half_width + atol):
        raise ValueError(
            f"{side} positions must lie in [-{half_width}, {half_width}]^2"
        )
    dmin = pairwise_min_distance(positions)
    if dmin < min_spacing - atol:
        raise ValueError(
            f"{side} pairwise spacing {dmin:.6g} below required {min_spacing:.6g}"
        )


def check_covariance(matrix: np.ndarray, power_budget: float) -> np.ndarray:
    """Validate a transmit covariance candidate; return it as complex array.

    Checks Hermitian symmetry, positive semidefiniteness and the trace
    budget, each within the documented tolerances.
    """
    q = np.asarray(matrix, dtype=complex)
    if q.ndim != 2 or q.shape[0] != q.shape[1]:
        raise ValueError("covariance must be a square matrix")
    if not np.all(np.isfinite(q.real)) or not np.all(np.isfinite(q.imag)):
        raise ValueError("covariance contains non-finite values")
    herm_err = float(np.max(np.abs(q - q.conj().T))) if q.size else 0.0
    if herm_err > HERMITIAN_ATOL:
        raise ValueError(f"covariance not Hermitian: max |Q - Q^H| = {herm_err:.3g}")
    trace = float(np.trace(q).real)
    eigmin = float(np.linalg.eigvalsh(0.5 * (q + q.conj().T)).min())
    if eigmin < -PSD_RTOL * max(trace, 1.0):
        raise ValueError(f"covariance not PSD: min eigenvalue {eigmin:.3g}")
    if trace > power_budget * (1.0 + TRACE_RTOL):
        raise ValueError(
            f"covariance trace {trace:.12g} exceeds power budget {power_budget:.12g}"
        )
    return q


def check_finite(arr: np.ndarray, name: str) -> np.ndarray:
    """Raise ValueError when the array contains NaN or infinities."""
    a = np.asarray(arr)
    values = np.concatenate([a.real.ravel(), a.imag.ravel()]) if np.iscomplexobj(a) else a.ravel()
    if not np.all(np.isfinite(values)):
        raise ValueError(f"{name} contains non-finite values")
    return a
