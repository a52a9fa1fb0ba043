"""Exception types shared across the package."""


class FracOrliczError(Exception):
    """Base class for all package errors."""


class DomainError(FracOrliczError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class GridMismatchError(FracOrliczError, ValueError):
    """Two grid functions (or a grid function and parameters) disagree on T or n."""


class ConditionViolationError(FracOrliczError):
    """A structural condition on an N-function fails (e.g. unbounded growth ratio)."""


class UnboundedNormError(FracOrliczError):
    """The Luxemburg gauge could not be bracketed: the modular stays non-finite."""


class ARViolationError(FracOrliczError):
    """The superlinearity (Ambrosetti-Rabinowitz) sampling check rejected a nonlinearity."""


class GeometryError(FracOrliczError):
    """Mountain-pass geometry could not be certified (beta <= 0 or no downhill state)."""


class DegenerateDescentError(FracOrliczError):
    """The mountain-pass iteration collapsed toward the trivial solution."""


class NonConvergenceError(FracOrliczError):
    """Iteration cap reached before the residual tolerance; carries the best iterate."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class ConfigError(FracOrliczError, ValueError):
    """Experiment configuration file or flags are invalid."""
