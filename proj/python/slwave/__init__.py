"""Stress-based strain-limiting wave solver."""

from ._core import (
    ConvergenceRow,
    FitResult,
    MaterialParams,
    RunReport,
    StudyConfig,
    convergence_study,
    default_config,
    fit_material,
    mms_forcing,
    r_squared,
    simulate,
    simulate_to_directory,
    strain,
    strain_derivative,
    synthetic_dataset,
    wave_speed,
    wave_speed_excess,
)

__all__ = [
    "ConvergenceRow",
    "FitResult",
    "MaterialParams",
    "RunReport",
    "StudyConfig",
    "convergence_study",
    "default_config",
    "fit_material",
    "mms_forcing",
    "r_squared",
    "simulate",
    "simulate_to_directory",
    "strain",
    "strain_derivative",
    "synthetic_dataset",
    "wave_speed",
    "wave_speed_excess",
]
