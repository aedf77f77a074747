"""Loss-normalized phase estimation: classical multi-pass, quantum bounds,
squeezed Gaussian probes, interferometric networks and imperfect setups."""
from .analytic import (
    Mode,
    Strategy,
    StrategyEvaluation,
    advantage_ratio,
    classical_fpl,
    classical_fpl_opt,
    classical_kopt,
    fig2a_scan,
    quantum_bound_discrete_opt,
    quantum_bound_fpl,
    quantum_bound_limit,
)
from .channels import DomainError, LossyPhase, PassCount, compose, lost_photons, noon_comparison
from .gaussian import (
    GaussianSchemeParams,
    GaussianState,
    homodyne_fisher,
    moment_pipeline_fisher,
    optimal_nsq_fixed_n,
    required_squeezing_db,
    scheme_fisher,
    scheme_fpl_limit,
)
from .imperfect import ImperfectionBudget, advantage, imperfect_fpl, surface_grid, threshold_eta_r
from .network import (
    NetworkConfig,
    network_fpl,
    optimize_network,
    optimize_network_continuous,
    transfer_matrix,
    transfer_matrix_dtheta,
)
from .specfun import MetrologyConstants, constants, lambert_w0

__version__ = "0.1.0"
