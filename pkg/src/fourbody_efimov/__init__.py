"""Universal four-body channel structure of A+A+A+B at infinite a_AA and the
resulting recombination into Efimov trimers."""

__version__ = "0.1.0"

from .constants import UniversalConstants, residual_s, solve_s0, solve_s_alpha, universal_constants
from .errors import (
    AccuracyWarning,
    ConvergenceError,
    DomainError,
    EfimovError,
    ModeError,
    NumericalError,
    ValidationError,
)
from .system import AtomTrimer, Continuum, ModelParams, ParticleSystem, alpha_min, build_system

__all__ = [
    "AccuracyWarning",
    "AtomTrimer",
    "Continuum",
    "ConvergenceError",
    "DomainError",
    "EfimovError",
    "ModeError",
    "ModelParams",
    "NumericalError",
    "ParticleSystem",
    "UniversalConstants",
    "ValidationError",
    "alpha_min",
    "build_system",
    "residual_s",
    "solve_s0",
    "solve_s_alpha",
    "universal_constants",
]
