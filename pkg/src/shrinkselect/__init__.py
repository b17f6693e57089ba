"""Improved weighted least squares with adaptive model selection for
continuous-time regression under OU-Levy noise."""

from .basis import (
    FourierEstimates,
    basis_matrix,
    d_zero,
    estimate_coefficients,
    l2_norm_sq,
    phi_star_integral,
    reconstruct,
    trig,
)
from .config import ConfigError, ExperimentConfig, parse_config
from .montecarlo import RiskReport, empirical_risk, pinsker_constant, run_experiment
from .noise import (
    NoiseFamilyBounds,
    NoiseParams,
    SamplePath,
    check_family,
    kappa_q,
    sigma_q,
    simulate_jumps,
    simulate_ou_levy,
)
from .observation import TEST_SIGNAL, ObservationRecord, Signal, generate_observations, integrate_against_dy
from .selection import (
    ShrinkageConfig,
    WeightGrid,
    build_grid,
    cost,
    estimate_sigma,
    grid_preset,
    penalty,
    select,
    tau_beta,
)
from .shrinkage import ShrinkageParams, c_n, l_n_star, shrink

__version__ = "0.1.0"
