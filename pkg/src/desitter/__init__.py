"""Fourier-space solution operators and numerical audits for semilinear
wave equations on a de Sitter background.

Modules
-------
specfun
    Kummer's functions, the second solution for integer parameters, Bessel
    ``J0``/``Y0``.
transforms
    Regime classification and the exponential shift ``phi = e^{rt} u``.
kernels
    Fourier multipliers of the linear problem, the ODE oracle and the
    multiplier bound audits.
spectral
    Torus Sobolev norms and the semilinear Duhamel solver.
estimates
    Admissible exponents, linear decay rates and rate fitting.
inequalities
    Ensemble audits of fractional functional inequalities.
cli
    Configuration-driven experiments.
"""

from . import _backend
from .errors import (
    BlowUpError,
    ConfigError,
    DomainError,
    GridMismatchError,
    HypothesisViolation,
    IntegratorError,
    InvalidParameterError,
    NoContractionError,
    NoConvergenceError,
)
from .fields import GridSpec, SpectralField, Trajectory
from .transforms import InitialData, ModelParams, Regime, derive_params

__version__ = "0.1.0"
BACKEND = _backend.NAME

__all__ = [
    "BACKEND",
    "BlowUpError",
    "ConfigError",
    "DomainError",
    "GridMismatchError",
    "GridSpec",
    "HypothesisViolation",
    "InitialData",
    "IntegratorError",
    "InvalidParameterError",
    "ModelParams",
    "NoContractionError",
    "NoConvergenceError",
    "Regime",
    "SpectralField",
    "Trajectory",
    "derive_params",
]
