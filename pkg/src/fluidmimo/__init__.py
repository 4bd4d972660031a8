"""Rate maximization for fluid-antenna MIMO systems with statistical CSI.

The package models the far-field geometric channel of position-
reconfigurable (fluid/movable) antennas, evaluates a deterministic upper
bound on the ergodic rate, and jointly optimizes the transmit covariance
and antenna positions by alternating closed-form and per-antenna
minorize-maximize updates. Baseline designs, Monte Carlo rate evaluation
and a seeded experiment CLI round out the toolkit.
"""

from .channel import (
    TransmitCovariance,
    assemble_channel,
    field_matrices,
    jensen_expectation,
    propagation_delta,
    rx_field_vector,
    tx_field_vector,
    upper_bound_rate,
)
from .config import ConfigError, ExperimentSpec, parse_config
from .estimator import RateMaximizer
from .evaluation import (
    BaselineKind,
    ErgodicRateEstimate,
    build_baseline_layout,
    ergodic_rate_mc,
    relative_gain,
    sample_path_matrix,
)
from .optimizer import (
    SolveTrace,
    SolverConfig,
    alternate_optimize,
    receive_coefficient_matrix,
    transmit_coefficient_matrix,
    update_covariance,
)
from .params import AntennaLayout, PathAngles, Scenario, SystemParams
from .subproblem import (
    PositionSubproblem,
    curvature_bound,
    position_gradient,
    position_objective,
    solve_position_step,
)

__all__ = [
    "AntennaLayout",
    "BaselineKind",
    "ConfigError",
    "ErgodicRateEstimate",
    "ExperimentSpec",
    "PathAngles",
    "PositionSubproblem",
    "RateMaximizer",
    "Scenario",
    "SolveTrace",
    "SolverConfig",
    "SystemParams",
    "TransmitCovariance",
    "alternate_optimize",
    "assemble_channel",
    "build_baseline_layout",
    "curvature_bound",
    "ergodic_rate_mc",
    "field_matrices",
    "jensen_expectation",
    "parse_config",
    "position_gradient",
    "position_objective",
    "propagation_delta",
    "receive_coefficient_matrix",
    "relative_gain",
    "rx_field_vector",
    "sample_path_matrix",
    "solve_position_step",
    "transmit_coefficient_matrix",
    "tx_field_vector",
    "update_covariance",
    "upper_bound_rate",
]

__version__ = "0.1.0"
