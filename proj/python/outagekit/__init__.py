"""Outage simulation and asymptotic analysis for spatial MAC schemes."""

from ._core import (
    ConfigParseError,
    Error,
    EstimationError,
    NotImplementedError,
    NumericalError,
    ParameterError,
    UsageError,
    asymptotic,
    classify,
    epstein_zeta,
    eta_max,
    figure_ids,
    gamma_csma,
    reproduce_figure,
    simulate,
    success_ppp_aloha,
    tdma_bounds,
)

__all__ = [
    "ConfigParseError",
    "Error",
    "EstimationError",
    "NotImplementedError",
    "NumericalError",
    "ParameterError",
    "UsageError",
    "asymptotic",
    "classify",
    "epstein_zeta",
    "eta_max",
    "figure_ids",
    "gamma_csma",
    "reproduce_figure",
    "simulate",
    "success_ppp_aloha",
    "tdma_bounds",
]
