"""Ranking pressure in centralized matching markets.

Reduced-form model of a doctor facing L acceptable programs, where accepting
programs may pressure the doctor into listing them first and the
clearinghouse may randomly swap the top two submitted entries. Provides
closed-form statistics, an exact enumeration oracle, a seeded Monte Carlo
simulator, and calibration of (a, e) from observed conditional match rates.
"""

from ._core import (
    CalibratedParams,
    Configuration,
    EstimateWithError,
    KeyStatistics,
    ModelParams,
    SimulationResult,
    __version__,
    alpha_feasible,
    build_submitted_list,
    calibrate,
    enumerate_configurations,
    epsilon_for_alpha,
    exact_conditional_match_rates,
    exact_permutation_rank_loss,
    exact_rank_loss,
    exact_rank_loss_random,
    exact_type1_error,
    key_statistics,
    match,
    p_first,
    p_later,
    permutation_rank_loss,
    q_lower_bound,
    quantile_loss,
    rank_loss,
    rank_loss_random,
    rates_from_counts,
    realized_rank_loss,
    relocate_program,
    simulate_statistics,
    swap_first_two,
    type1_error_no_swap,
    type1_error_with_swap,
)

__all__ = [
    "CalibratedParams",
    "Configuration",
    "EstimateWithError",
    "KeyStatistics",
    "ModelParams",
    "SimulationResult",
    "__version__",
    "alpha_feasible",
    "build_submitted_list",
    "calibrate",
    "enumerate_configurations",
    "epsilon_for_alpha",
    "exact_conditional_match_rates",
    "exact_permutation_rank_loss",
    "exact_rank_loss",
    "exact_rank_loss_random",
    "exact_type1_error",
    "key_statistics",
    "match",
    "p_first",
    "p_later",
    "permutation_rank_loss",
    "q_lower_bound",
    "quantile_loss",
    "rank_loss",
    "rank_loss_random",
    "rates_from_counts",
    "realized_rank_loss",
    "relocate_program",
    "simulate_statistics",
    "swap_first_two",
    "type1_error_no_swap",
    "type1_error_with_swap",
]
