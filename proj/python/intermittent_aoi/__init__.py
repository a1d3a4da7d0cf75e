"""Age of information for an intermittently powered sensor."""

from ._aoi_core import (
    AgeThreshold,
    ConfigError,
    DiscreteDist,
    DomainError,
    Hybrid,
    NoThresholdZeroWait,
    NumericError,
    PeakSolution,
    Pod,
    SystemParams,
    TransmissionModel,
    average_aoi,
    describe,
    g_root_function,
    h_minimizer,
    k_criterion,
    optimize_policy,
    peak_aoi,
    peak_aoi_threshold_policy,
    run_command,
    simulate,
    solve_threshold,
    threshold_cost,
    x_star,
)

__all__ = [
    "AgeThreshold",
    "ConfigError",
    "DiscreteDist",
    "DomainError",
    "Hybrid",
    "NoThresholdZeroWait",
    "NumericError",
    "PeakSolution",
    "Pod",
    "SystemParams",
    "TransmissionModel",
    "average_aoi",
    "describe",
    "g_root_function",
    "h_minimizer",
    "k_criterion",
    "optimize_policy",
    "peak_aoi",
    "peak_aoi_threshold_policy",
    "run_command",
    "simulate",
    "solve_threshold",
    "threshold_cost",
    "x_star",
]
