"""Squeezed coherent states of the Morse oscillator."""

from .coefficients import (
    ResidualReport,
    StateParams,
    StateVector,
    build_state,
    probability,
    residual,
    z_recurrence,
    zeta_lambda_to_z_gamma,
)
from .ladders import LadderKind, LadderSpec
from .model import PRESETS, MorseParams
from .observables import ObservableReport, QuadratureConfig, compute_report, ho_reference

__all__ = [
    "PRESETS",
    "LadderKind",
    "LadderSpec",
    "MorseParams",
    "ObservableReport",
    "QuadratureConfig",
    "ResidualReport",
    "StateParams",
    "StateVector",
    "build_state",
    "compute_report",
    "ho_reference",
    "probability",
    "residual",
    "z_recurrence",
    "zeta_lambda_to_z_gamma",
]

__version__ = "0.1.0"
