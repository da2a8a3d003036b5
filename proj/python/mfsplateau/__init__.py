"""Minimal surfaces spanning closed space curves via the method of fundamental solutions."""

from ._core import (
    ApproximateSurface,
    BoundaryCurve,
    ConfigError,
    MfsBasis,
    NumericalError,
    build_surface,
    classify_energies,
    energy,
    equidistant,
    fourier_initial,
    gradient,
    nesterov_run,
    random_initial,
    run_cli,
)

__all__ = [
    "ApproximateSurface",
    "BoundaryCurve",
    "ConfigError",
    "MfsBasis",
    "NumericalError",
    "build_surface",
    "classify_energies",
    "energy",
    "equidistant",
    "fourier_initial",
    "gradient",
    "nesterov_run",
    "random_initial",
    "run_cli",
]
