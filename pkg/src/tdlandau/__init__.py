"""Coherent and photon-added coherent states of a charged particle in a
time-dependent magnetic (Landau) setting: states, statistics, weights,
Wigner functions and the envelope dynamics they ride on."""

from .dynamics import ModelProfile, constant_profile, frame_at, solve_ermakov, static_frame
from .errors import (
    ConfigError,
    ConvergenceError,
    DomainError,
    LabelMismatchError,
    SeriesCapError,
    SingularityError,
    StiffnessError,
    UndefinedPointError,
)
from .measure import bg_weight, pacs_weight, weight_function
from .states import StateSpec, bg_norm, build_coefficients, overlap, pacs_norm
from .statistics import g2, mandel_q, mean_photon_number, photon_statistics, pnd
from .wigner import wigner_direct, wigner_grid, wigner_series

__version__ = "0.1.0"

__all__ = [
    "ModelProfile", "constant_profile", "frame_at", "solve_ermakov", "static_frame",
    "ConfigError", "ConvergenceError", "DomainError", "LabelMismatchError", "SeriesCapError",
    "SingularityError", "StiffnessError", "UndefinedPointError",
    "bg_weight", "pacs_weight", "weight_function",
    "StateSpec", "bg_norm", "build_coefficients", "overlap", "pacs_norm",
    "g2", "mandel_q", "mean_photon_number", "photon_statistics", "pnd",
    "wigner_direct", "wigner_grid", "wigner_series",
]
