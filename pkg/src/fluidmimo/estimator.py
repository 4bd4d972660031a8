"""Scikit-learn style front end for the alternating rate optimizer."""

from __future__ import annotations

from typing import Optional

from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .evaluation import BaselineKind, build_baseline_layout, ergodic_rate_mc
from .optimizer import SolverConfig, alternate_optimize
from .params import Scenario

__all__ = ["RateMaximizer"]


class RateMaximizer(BaseEstimator):
    """Optimize antenna positions and transmit covariance for a scenario.

    Follows the scikit-learn estimator contract: hyperparameters are set
    in ``__init__`` and stored verbatim, ``fit`` consumes a
    :class:`~fluidmimo.params.Scenario` and exposes the result through
    trailing-underscore attributes.

    Parameters
    ----------
    design : str
        "fa" (move both sides), "rfa" (receive side only) or "fpa"
        (covariance only).
    epsilon : float
        Convergence threshold on the objective improvement (bits/s/Hz).
    max_outer_iters, max_inner_iters : int
        Outer-loop and per-antenna inner-loop iteration caps.
    inner_tolerance : float or None
        Inner displacement threshold in meters; None means 1e-6 wavelengths.
    hessian_bound_safety : float
        Multiplier >= 1 on the certified surrogate curvature bound.
    probe_points_per_wavelength : float
        Density of the deterministic probe grid (0 disables probing).

    Attributes
    ----------
    layout_ : AntennaLayout
        Final antenna positions.
    covariance_ : TransmitCovariance
        Covariance matched to the final layout (trace = power budget).
    objective_path_ : tuple of float
        Non-decreasing per-iteration objective values, bits/s/Hz.
    bound_ : float
        Final deterministic rate bound.
    n_iter_ : int
        Outer iterations used.
    converged_ : bool
        Whether the threshold stopped the loop before the cap.
    """

    def __init__(
        self,
        design: str = "fa",
        epsilon: float = 1e-3,
        max_outer_iters: int = 100,
        max_inner_iters: int = 30,
        inner_tolerance: Optional[float] = None,
        hessian_bound_safety: float = 1.0,
        probe_points_per_wavelength: float = 4.0,
    ):
        self.design = design
        self.epsilon = epsilon
        self.max_outer_iters = max_outer_iters
        self.max_inner_iters = max_inner_iters
        self.inner_tolerance = inner_tolerance
        self.hessian_bound_safety = hessian_bound_safety
        self.probe_points_per_wavelength = probe_points_per_wavelength

    def _config(self) -> SolverConfig:
        return SolverConfig(
            epsilon=self.epsilon,
            max_outer_iters=self.max_outer_iters,
            max_inner_iters=self.max_inner_iters,
            inner_tolerance=self.inner_tolerance,
            hessian_bound_safety=self.hessian_bound_safety,
            probe_points_per_wavelength=self.probe_points_per_wavelength,
        )

    def fit(self, scenario: Scenario, y=None) -> "RateMaximizer":
        """Run the alternating optimizer on ``scenario``."""
        if not isinstance(scenario, Scenario):
            raise TypeError("fit expects a Scenario")
        kind = BaselineKind(self.design)
        layout = scenario.initial_layout
        if layout is None:
            layout = build_baseline_layout(
                kind,
                scenario.num_tx,
                scenario.num_rx,
                scenario.params,
                scenario.region_half_width,
                scenario.min_spacing,
            )
        trace = alternate_optimize(
            layout,
            scenario.angles,
            scenario.params,
            self._config(),
            optimize_tx=kind.moves_tx,
            optimize_rx=kind.moves_rx,
        )
        self.layout_ = trace.final_layout
        self.covariance_ = trace.final_covariance
        self.objective_path_ = trace.objective_per_outer_iter
        self.bound_ = trace.objective_per_outer_iter[-1]
        self.n_iter_ = trace.outer_iters_used
        self.converged_ = trace.converged
        self.scenario_ = scenario
        return self

    def _check_fitted(self) -> None:
        if not hasattr(self, "layout_"):
            raise NotFittedError("call fit before using the fitted attributes")

    def score(self, scenario: Optional[Scenario] = None, y=None) -> float:
        """Deterministic rate bound of the fitted design (bits/s/Hz)."""
        self._check_fitted()
        return self.bound_

    def estimate_rate(self, num_samples: int = 10_000, seed=0):
        """Monte Carlo ergodic rate of the fitted design."""
        self._check_fitted()
        return ergodic_rate_mc(
            self.layout_,
            self.scenario_.angles,
            self.covariance_,
            self.scenario_.params,
            num_samples=num_samples,
            seed=seed,
        )
