"""Single-antenna position subproblem: maximize a quadratic form of the
field response vector over the movement region under spacing constraints.

The objective p(x) = f(x)^H B f(x) is a finite sum of planar cosines, so
its Hessian admits a cheap certified bound. Each step maximizes the
concave quadratic minorant exactly over the polygon formed by the region
box and the linearized spacing constraints; because the surrogate has
isotropic curvature this reduces to a Euclidean projection, which a 2-D
vertex/edge enumeration solves exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .params import PathAngles, SystemParams
from .channel import path_directions

__all__ = [
    "SolverConfig",
    "PositionSubproblem",
    "position_objective",
    "position_gradient",
    "curvature_bound",
    "solve_position_step",
]

# Constraint slack used when classifying candidate points as feasible; the
# spacing guarantee degrades by at most this amount.
_FEAS_TOL = 1e-9

# Lower clamp keeping the surrogate curvature strictly positive.
_MIN_CURVATURE = 1e-12


@dataclass(frozen=True)
class SolverConfig:
    """Tunables of the alternating optimizer and its inner position steps.

    ``inner_tolerance`` is an absolute displacement threshold in meters;
    ``None`` resolves to 1e-6 wavelengths. ``probe_points_per_wavelength``
    controls the deterministic coarse grid used to escape poor local
    basins in the oscillatory position objective (0 disables probing).
    """

    epsilon: float = 1e-3
    max_outer_iters: int = 100
    max_inner_iters: int = 30
    inner_tolerance: Optional[float] = None
    hessian_bound_safety: float = 1.0
    probe_points_per_wavelength: float = 32.0
    num_probe_starts: int = 4

    def __post_init__(self) -> None:
        if not self.epsilon > 0:
            raise ValueError("epsilon must be > 0")
        if self.max_outer_iters < 1 or self.max_inner_iters < 1:
            raise ValueError("iteration caps must be >= 1")
        if self.inner_tolerance is not None and not self.inner_tolerance > 0:
            raise ValueError("inner_tolerance must be > 0")
        if self.hessian_bound_safety < 1.0:
            raise ValueError("hessian_bound_safety must be >= 1")
        if self.probe_points_per_wavelength < 0:
            raise ValueError("probe_points_per_wavelength must be >= 0")
        if self.num_probe_starts < 1:
            raise ValueError("num_probe_starts must be >= 1")

    def resolved_inner_tolerance(self, wavelength: float) -> float:
        if self.inner_tolerance is not None:
            return self.inner_tolerance
        return 1e-6 * wavelength


@dataclass(frozen=True)
class PositionSubproblem:
    """One antenna's decoupled position problem.

    ``side`` selects which angle set applies ("tx" or "rx"); the
    coefficient matrix is B_m (receive, positive definite) or C_n
    (transmit, positive semidefinite). ``fixed_positions`` holds the other
    same-side antennas that induce spacing constraints.
    """

    side: str
    coefficient_matrix: np.ndarray
    fixed_positions: np.ndarray
    current_position: np.ndarray
    region_half_width: float
    min_spacing: float

    def __post_init__(self) -> None:
        if self.side not in ("tx", "rx"):
            raise ValueError("side must be 'tx' or 'rx'")
        object.__setattr__(
            self,
            "fixed_positions",
            np.asarray(self.fixed_positions, dtype=float).reshape(-1, 2),
        )
        object.__setattr__(
            self,
            "current_position",
            np.asarray(self.current_position, dtype=float).reshape(2),
        )

    def directions(self, angles: PathAngles) -> np.ndarray:
        if self.side == "tx":
            return path_directions(angles.tx_elevation, angles.tx_azimuth)
        return path_directions(angles.rx_elevation, angles.rx_azimuth)


# ---------------------------------------------------------------------------
# objective, gradient, curvature (array-level workers + public wrappers)
# ---------------------------------------------------------------------------

def _field(dirs: np.ndarray, wavenumber: float, point: np.ndarray) -> np.ndarray:
    return np.exp(1j * wavenumber * (dirs @ point))


def objective_value(
    coef: np.ndarray, dirs: np.ndarray, wavenumber: float, point: np.ndarray
) -> float:
    f = _field(dirs, wavenumber, point)
    return float(np.vdot(f, coef @ f).real)


def objective_batch(
    coef: np.ndarray, dirs: np.ndarray, wavenumber: float, points: np.ndarray
) -> np.ndarray:
    """Objective at many candidate points at once; points has shape (p, 2)."""
    fields = np.exp(1j * wavenumber * (points @ dirs.T))
    return np.einsum("pl,pl->p", fields.conj(), fields @ coef.T).real


def gradient_value(
    coef: np.ndarray, dirs: np.ndarray, wavenumber: float, point: np.ndarray
) -> np.ndarray:
    """Exact gradient of the quadratic form w.r.t. the planar coordinates.

    Differentiating the per-path phases gives, per coordinate i,
    dp/dx_i = 2k * sum_l dirs[l, i] * Im(conj(f_l) (B f)_l).
    """
    f = _field(dirs, wavenumber, point)
    w = coef @ f
    z = (f.conj() * w).imag
    return 2.0 * wavenumber * (z @ dirs)


def hessian_value(
    coef: np.ndarray, dirs: np.ndarray, wavenumber: float, point: np.ndarray
) -> np.ndarray:
    """Exact 2x2 Hessian of the quadratic form at ``point``.

    With df/dx_i = jk u_i . f the second derivatives split into a phase
    term -2k^2 Re{u_i u_j conj(f) (Bf)} and a cross term
    2k^2 Re{(u_i f)^H B (u_j f)}.
    """
    f = _field(dirs, wavenumber, point)
    w = coef @ f
    uf = dirs.T * f
    k2 = wavenumber * wavenumber
    phase_term = -2.0 * k2 * np.real(dirs.T @ ((f.conj() * w)[:, None] * dirs))
    cross_term = 2.0 * k2 * np.real(uf.conj() @ (coef @ uf.T))
    return phase_term + cross_term


def curvature_value(coef: np.ndarray, wavenumber: float, safety: float) -> float:
    """Certified bound on the Hessian spectral norm over the whole plane.

    Every term B_{ql} * exp(j k (d_l - d_q) . x) has phase-slope factors
    bounded by 2k per coordinate, so each Hessian entry is at most
    sum |B_{ql}| * (2k)^2, and a symmetric 2x2 matrix has spectral norm at
    most twice its largest entry magnitude.
    """
    bound = safety * 2.0 * (2.0 * wavenumber) ** 2 * float(np.sum(np.abs(coef)))
    return max(bound, _MIN_CURVATURE)


def position_objective(
    sub: PositionSubproblem, candidate, angles: PathAngles, params: SystemParams
) -> float:
    """Real value f(candidate)^H B f(candidate)."""
    dirs = sub.directions(angles)
    k = 2.0 * np.pi / params.wavelength
    return objective_value(
        sub.coefficient_matrix, dirs, k, np.asarray(candidate, dtype=float)
    )


def position_gradient(
    sub: PositionSubproblem, candidate, angles: PathAngles, params: SystemParams
) -> np.ndarray:
    """Analytic gradient of :func:`position_objective` at ``candidate``."""
    dirs = sub.directions(angles)
    k = 2.0 * np.pi / params.wavelength
    return gradient_value(
        sub.coefficient_matrix, dirs, k, np.asarray(candidate, dtype=float)
    )


def curvature_bound(
    sub: PositionSubproblem, params: SystemParams, safety: float = 1.0
) -> float:
    """Upper bound on the objective's Hessian spectral norm (clamped > 0)."""
    k = 2.0 * np.pi / params.wavelength
    return curvature_value(sub.coefficient_matrix, k, safety)


# ---------------------------------------------------------------------------
# exact surrogate maximization over the feasible polygon
# ---------------------------------------------------------------------------

_BOX_ROWS = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])


def _constraint_rows(
    x0: np.ndarray,
    fixed: np.ndarray,
    half_width: float,
    min_spacing: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Half-planes a.x <= c: the region box plus linearized spacing cuts.

    The spacing constraint |x - x_k| >= D is replaced by the half-plane
    (x0 - x_k).(x - x_k)/|x0 - x_k| >= D, a conservative subset by the
    Cauchy-Schwarz inequality, and one that contains x0 whenever x0 itself
    is feasible.
    """
    num_fixed = fixed.shape[0]
    rows = np.empty((4 + num_fixed, 2))
    offsets = np.empty(4 + num_fixed)
    rows[:4] = _BOX_ROWS
    offsets[:4] = half_width
    if num_fixed:
        diff = x0[None, :] - fixed
        dist = np.sqrt(np.sum(diff * diff, axis=1))
        # degenerate only if the entry position coincides with a neighbour,
        # which feasible entry (spacing >= D > 0) rules out
        assert np.all(dist > 0), "degenerate spacing linearization"
        normals = diff / dist[:, None]
        rows[4:] = -normals
        offsets[4:] = -(np.einsum("ij,ij->i", normals, fixed) + min_spacing)
    return rows, offsets


def _project_to_polygon(
    target: np.ndarray,
    x0: np.ndarray,
    rows: np.ndarray,
    offsets: np.ndarray,
) -> np.ndarray:
    """Closest point to ``target`` in {x : rows @ x <= offsets}.

    Maximizing the isotropic concave surrogate over the polygon is exactly
    this projection. Enumerates the interior candidate, per-edge
    projections and pairwise vertices; ties on distance-to-target are
    broken by distance to the current iterate x0.
    """
    if np.all(rows @ target <= offsets + _FEAS_TOL):
        return target
    candidates = []
    n_rows = rows.shape[0]
    # edge projections
    for i in range(n_rows):
        a = rows[i]
        x = target - (float(a @ target) - offsets[i]) * a  # rows have unit norm
        if np.all(rows @ x <= offsets + _FEAS_TOL):
            candidates.append(x)
    # vertices
    for i in range(n_rows):
        for j in range(i + 1, n_rows):
            det = rows[i, 0] * rows[j, 1] - rows[i, 1] * rows[j, 0]
            if abs(det) < 1e-12:
                continue
            x = (
                np.array(
                    [
                        offsets[i] * rows[j, 1] - offsets[j] * rows[i, 1],
                        rows[i, 0] * offsets[j] - rows[j, 0] * offsets[i],
                    ]
                )
                / det
            )
            if np.all(rows @ x <= offsets + _FEAS_TOL):
                candidates.append(x)
    if not candidates:
        # pathological numerically-empty polygon: stay put
        return x0.copy()
    pts = np.array(candidates)
    d_target = np.sum((pts - target) ** 2, axis=1)
    best = d_target.min()
    near = np.flatnonzero(d_target <= best + 1e-12 * (1.0 + best))
    if near.size == 1:
        return pts[near[0]]
    d_x0 = np.sum((pts[near] - x0) ** 2, axis=1)
    return pts[near[np.argmin(d_x0)]]


def _mm_ascent(
    coef: np.ndarray,
    dirs: np.ndarray,
    wavenumber: float,
    start: np.ndarray,
    fixed: np.ndarray,
    half_width: float,
    min_spacing: float,
    delta: float,
    max_iters: int,
    tol: float,
) -> tuple[np.ndarray, float]:
    """Monotone ascent from a feasible start.

    Each iteration maximizes the concave surrogate exactly over the
    polygon (a projection of x + grad/delta); when the exact Hessian is
    negative definite a projected Newton candidate is tried as well,
    which removes the slow crawl the loose certified curvature bound
    would otherwise impose near a peak. Moves are accepted only if the
    true objective does not decrease, so every iterate stays feasible
    and the objective sequence is non-decreasing.
    """
    x = start.astype(float).copy()
    value = objective_value(coef, dirs, wavenumber, x)
    for _ in range(max_iters):
        grad = gradient_value(coef, dirs, wavenumber, x)
        rows, offsets = _constraint_rows(x, fixed, half_width, min_spacing)
        cand = np.clip(
            _project_to_polygon(x + grad / delta, x, rows, offsets),
            -half_width,
            half_width,
        )
        cand_value = objective_value(coef, dirs, wavenumber, cand)
        hess = hessian_value(coef, dirs, wavenumber, x)
        det = hess[0, 0] * hess[1, 1] - hess[0, 1] * hess[1, 0]
        if hess[0, 0] < 0 and det > 0:
            newton = np.clip(
                _project_to_polygon(
                    x + np.linalg.solve(hess, -grad), x, rows, offsets
                ),
                -half_width,
                half_width,
            )
            newton_value = objective_value(coef, dirs, wavenumber, newton)
            if newton_value > cand_value:
                cand, cand_value = newton, newton_value
        if cand_value < value:
            break  # numerical guard; the minorant makes decrease impossible
        step = float(np.hypot(cand[0] - x[0], cand[1] - x[1]))
        x, value = cand, cand_value
        if step < tol:
            break
    return x, value


def _probe_grid(half_width: float, spacing: float) -> np.ndarray:
    """Deterministic fine grid covering the region box."""
    n = int(np.ceil(2.0 * half_width / spacing)) + 1
    n = min(max(n, 3), 201)
    axis = np.linspace(-half_width, half_width, n)
    xx, yy = np.meshgrid(axis, axis, indexing="ij")
    return np.column_stack([xx.ravel(), yy.ravel()])


def _diverse_starts(
    points: np.ndarray,
    values: np.ndarray,
    floor: float,
    radius: float,
    count: int,
) -> list:
    """Indices of the best probes, suppressing near-duplicates.

    Greedy selection by value, keeping only probes at least ``radius``
    apart so distinct basins of the oscillatory objective each get one
    polish start; probes not above ``floor`` are skipped.
    """
    order = np.argsort(values, kind="stable")[::-1]
    chosen: list = []
    r2 = radius * radius
    for idx in order:
        if values[idx] <= floor:
            break
        p = points[idx]
        ok = True
        for j in chosen:
            d0 = points[j, 0] - p[0]
            d1 = points[j, 1] - p[1]
            if d0 * d0 + d1 * d1 < r2:
                ok = False
                break
        if ok:
            chosen.append(idx)
            if len(chosen) >= count:
                break
    return chosen


# spatial separation of probe polish starts, in wavelengths
_SUPPRESSION_RADIUS = 0.25


def solve_step_arrays(
    coef: np.ndarray,
    dirs: np.ndarray,
    wavelength: float,
    x0: np.ndarray,
    fixed: np.ndarray,
    half_width: float,
    min_spacing: float,
    config: SolverConfig,
) -> np.ndarray:
    """Array-level position step used by the alternating optimizer.

    Runs the ascent from the entry point, then evaluates the objective on
    a deterministic probe grid and re-runs the ascent from the few best
    spatially-separated feasible probes that beat the entry result. The
    returned point is feasible and never worse than the entry point.
    """
    k = 2.0 * np.pi / wavelength
    delta = curvature_value(coef, k, config.hessian_bound_safety)
    tol = config.resolved_inner_tolerance(wavelength)
    entry_value = objective_value(coef, dirs, k, x0)

    best_x, best_value = _mm_ascent(
        coef, dirs, k, x0, fixed, half_width, min_spacing,
        delta, config.max_inner_iters, tol,
    )

    if config.probe_points_per_wavelength > 0:
        probes = _probe_grid(half_width, wavelength / config.probe_points_per_wavelength)
        if fixed.shape[0]:
            diff = probes[:, None, :] - fixed[None, :, :]
            dist2 = np.sum(diff * diff, axis=2)
            probes = probes[np.all(dist2 >= min_spacing**2, axis=1)]
        if probes.shape[0]:
            values = objective_batch(coef, dirs, k, probes)
            starts = _diverse_starts(
                probes,
                values,
                best_value,
                _SUPPRESSION_RADIUS * wavelength,
                config.num_probe_starts,
            )
            for idx in starts:
                if values[idx] <= best_value:
                    continue
                alt_x, alt_value = _mm_ascent(
                    coef, dirs, k, probes[idx], fixed, half_width, min_spacing,
                    delta, config.max_inner_iters, tol,
                )
                if alt_value > best_value:
                    best_x, best_value = alt_x, alt_value

    if best_value < entry_value:
        return x0.astype(float).copy()
    return best_x


def solve_position_step(
    sub: PositionSubproblem,
    angles: PathAngles,
    params: SystemParams,
    config: SolverConfig,
) -> np.ndarray:
    """Improve one antenna's position; the result is feasible and no worse.

    Raises ValueError when the entry position itself violates the region
    box or the spacing constraints, which indicates a caller bug.
    """
    x0 = sub.current_position
    hw = sub.region_half_width
    if np.any(np.abs(x0) > hw + _FEAS_TOL):
        raise ValueError("entry position outside the region box")
    if sub.fixed_positions.shape[0]:
        dist = np.sqrt(np.sum((x0[None, :] - sub.fixed_positions) ** 2, axis=1))
        if np.any(dist < sub.min_spacing - _FEAS_TOL):
            raise ValueError("entry position violates the minimum spacing")
    dirs = sub.directions(angles)
    return solve_step_arrays(
        sub.coefficient_matrix,
        dirs,
        params.wavelength,
        x0,
        sub.fixed_positions,
        hw,
        sub.min_spacing,
        config,
    )
