"""Downlink cell association and load balancing for joint mmW/microwave networks.

A system-level Monte Carlo simulator built around a reusable one-to-many
matching engine with minimum-quota constraints, plus the classical
deferred-acceptance, max-RSSI, and max-SINR association baselines.
"""

from .channel import (
    LinkRealization,
    db_to_linear,
    draw_los_slots,
    linear_to_db,
    mmw_spectral_efficiency,
    muw_spectral_efficiency,
    noise_power_dbm,
    path_loss_db,
    realize_links,
    sample_los,
)
from .experiments import (
    ExperimentConfig,
    VerificationFailure,
    load_config,
    parse_config,
    run_experiment,
    run_figure,
)
from .los import LosEstimate, oracle_f, update_f
from .matching import (
    EnumerationBudgetError,
    InfeasibleInstanceError,
    Matching,
    MatchingError,
    MatchingInstance,
    VerifierReport,
    build_matching,
    deferred_acceptance,
    enumerate_feasible,
    format_instance,
    mmq_match,
    parse_instance,
    verify,
)
from .metrics import (
    RunMetrics,
    achievable_rates,
    load_vector,
    max_load_difference,
    optimal_min_quota_sweep,
    rate_cdf,
    run_metrics,
    slot_averaged_rates,
)
from .policies import (
    PolicyConfig,
    UtilityTable,
    build_master_list,
    build_matching_instance,
    build_preferences,
    compute_utilities,
    max_rssi_policy,
    max_sinr_policy,
    mmq_policy,
    rssi_matrix_dbm,
    sinr_matrix_db,
)
from .scenario import (
    ConfigurationError,
    PathLossParams,
    Scenario,
    ScenarioConfig,
    distance,
    generate_scenario,
    rng_stream,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError",
    "EnumerationBudgetError",
    "ExperimentConfig",
    "InfeasibleInstanceError",
    "LinkRealization",
    "LosEstimate",
    "Matching",
    "MatchingError",
    "MatchingInstance",
    "PathLossParams",
    "PolicyConfig",
    "RunMetrics",
    "Scenario",
    "ScenarioConfig",
    "UtilityTable",
    "VerificationFailure",
    "VerifierReport",
    "achievable_rates",
    "build_master_list",
    "build_matching",
    "build_matching_instance",
    "build_preferences",
    "compute_utilities",
    "db_to_linear",
    "deferred_acceptance",
    "distance",
    "draw_los_slots",
    "enumerate_feasible",
    "format_instance",
    "generate_scenario",
    "linear_to_db",
    "load_config",
    "load_vector",
    "max_load_difference",
    "max_rssi_policy",
    "max_sinr_policy",
    "mmq_match",
    "mmq_policy",
    "mmw_spectral_efficiency",
    "muw_spectral_efficiency",
    "noise_power_dbm",
    "optimal_min_quota_sweep",
    "oracle_f",
    "parse_config",
    "parse_instance",
    "path_loss_db",
    "rate_cdf",
    "realize_links",
    "rng_stream",
    "rssi_matrix_dbm",
    "run_experiment",
    "run_figure",
    "run_metrics",
    "sample_los",
    "sinr_matrix_db",
    "slot_averaged_rates",
    "update_f",
    "verify",
]
