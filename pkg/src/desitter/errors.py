"""Exception types shared across the package."""


class InvalidParameterError(ValueError):
    """A special-function parameter is outside the admissible set."""


class NoConvergenceError(ArithmeticError):
    """No evaluation path met the requested tolerance."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class HypothesisViolation(ValueError):
    """The parameters do not satisfy the hypotheses of a theorem or inequality."""


class GridMismatchError(ValueError):
    """Fields that must share a grid do not."""


class BlowUpError(ArithmeticError):
    """The solver produced non-finite values.

    Attributes
    ----------
    time : float
        Time at which the first non-finite value appeared.
    """

    def __init__(self, message, time):
        super().__init__(message)
        self.time = time


class IntegratorError(ArithmeticError):
    """The reference ODE integrator failed for some mode."""


class ConfigError(ValueError):
    """A configuration file could not be parsed or validated."""


class NoContractionError(ArithmeticError):
    """Picard distances failed to shrink for several consecutive iterations."""


class InsufficientSamplesError(ValueError):
    """Too few samples fall inside a fitting window."""


class NonPositiveNormError(ValueError):
    """A norm to be fitted on a log scale is zero or negative."""
