"""Exception types shared across the package."""

from __future__ import annotations


class TempodiscError(Exception):
    """Base class for every package-specific failure."""


class DomainError(TempodiscError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class DivergenceError(TempodiscError, ArithmeticError):
    """Discount curve collapsed: the deformed exponential reached zero.

    Carries the offending time so callers can report where the model
    stops being evaluable instead of returning an infinity.
    """

    def __init__(self, message: str, t: float | None = None):
        super().__init__(message)
        self.t = t


class StepFailureError(TempodiscError, RuntimeError):
    """ODE reconstruction produced a non-finite or non-positive state."""

    def __init__(self, message: str, t: float | None = None):
        super().__init__(message)
        self.t = t


class NoCrossingError(TempodiscError):
    """Present-value curves never change order: no preference reversal."""


class InsufficientDataError(TempodiscError, ValueError):
    """Fewer data points than free parameters to fit."""


class NonConvergenceError(TempodiscError, RuntimeError):
    """Titration exhausted its trial budget before a preference switch."""


class UnsupportedModelError(TempodiscError, ValueError):
    """Operation undefined for this model configuration."""


class FormatError(TempodiscError, ValueError):
    """Malformed input: spec JSON, dataset CSV, or command-line value."""
