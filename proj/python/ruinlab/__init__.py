"""Ruin probabilities of the Brownian risk model with constant force of interest."""

from ._ruinlab import (
    ConfigError,
    DomainError,
    ModelParams,
    __version__,
    asymptotic_params,
    estimate_piterbarg,
    estimate_ruin_prob,
    normal_cdf,
    normal_tail,
    parisian_asymptotic,
    psi_S_zero_exact,
    psi_inf,
    ruin_time_tail,
    ruin_time_tail_asymptotic,
    run_cli,
)

__all__ = [
    "ConfigError",
    "DomainError",
    "ModelParams",
    "__version__",
    "asymptotic_params",
    "estimate_piterbarg",
    "estimate_ruin_prob",
    "normal_cdf",
    "normal_tail",
    "parisian_asymptotic",
    "psi_S_zero_exact",
    "psi_inf",
    "ruin_time_tail",
    "ruin_time_tail_asymptotic",
    "run_cli",
]
