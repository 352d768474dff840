"""Transmission-rate statistics of Poisson bipolar networks.

Analytic rate statistics for the continuum broadcast (superposition-layering)
strategy and the single-threshold outage strategy over a Poisson field of
interferers with Rayleigh fading, plus rate-outage-constrained transmission
capacity and a Monte Carlo cross-validation harness.
"""

from .broadcast import (
    Origin,
    PowerProfile,
    RateStats,
    complete_outage,
    layer_rate,
    mean_rate,
    rate_functional,
    second_moment,
    sine_perturbation,
    solve_profile,
    stationarity_check,
    variance,
)
from .capacity import (
    CapacityQuery,
    CapacityResult,
    max_density,
    rate_outage,
    transmission_capacity,
)
from .errors import (
    BcastNetError,
    BranchPointError,
    DomainError,
    InadmissiblePerturbationError,
    InfeasibleError,
    NoBracketError,
    ParameterError,
    RegimeError,
    TruncationWarning,
)
from .montecarlo import (
    SimConfig,
    SimResult,
    broadcast_rates_from_states,
    broadcast_stats_from_states,
    collect_states,
    default_r_max,
    outage_stats_from_states,
    sample_state,
    simulate_broadcast,
    simulate_outage,
    states_for_fixed_interferers,
    trial_rng,
    write_samples,
)
from .network import (
    DerivedConstants,
    NetworkParams,
    Regime,
    cdf_s,
    conditional_ccdf,
    derive,
    infer_regime,
)
from .outage import (
    OutageConfig,
    OutageMode,
    matched_beta,
    mean_rate_os,
    optimal_beta,
    rate_stats_os,
    resolve_beta,
    success_probability,
)
from .specfun import (
    DEFAULT_TOL,
    Tolerance,
    exp_int,
    gamma_upper_2,
    lambert_w0,
    z_delta,
)

__version__ = "0.1.0"

__all__ = [
    "BcastNetError",
    "BranchPointError",
    "CapacityQuery",
    "CapacityResult",
    "DEFAULT_TOL",
    "DerivedConstants",
    "DomainError",
    "InadmissiblePerturbationError",
    "InfeasibleError",
    "NetworkParams",
    "NoBracketError",
    "Origin",
    "OutageConfig",
    "OutageMode",
    "ParameterError",
    "PowerProfile",
    "RateStats",
    "Regime",
    "RegimeError",
    "SimConfig",
    "SimResult",
    "Tolerance",
    "TruncationWarning",
    "broadcast_rates_from_states",
    "broadcast_stats_from_states",
    "cdf_s",
    "collect_states",
    "complete_outage",
    "conditional_ccdf",
    "default_r_max",
    "derive",
    "exp_int",
    "gamma_upper_2",
    "infer_regime",
    "lambert_w0",
    "layer_rate",
    "matched_beta",
    "max_density",
    "mean_rate",
    "mean_rate_os",
    "optimal_beta",
    "outage_stats_from_states",
    "rate_functional",
    "rate_outage",
    "rate_stats_os",
    "resolve_beta",
    "sample_state",
    "second_moment",
    "simulate_broadcast",
    "simulate_outage",
    "sine_perturbation",
    "solve_profile",
    "states_for_fixed_interferers",
    "stationarity_check",
    "success_probability",
    "transmission_capacity",
    "trial_rng",
    "variance",
    "write_samples",
    "z_delta",
    "__version__",
]
