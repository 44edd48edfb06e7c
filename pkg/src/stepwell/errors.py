"""Exception hierarchy.

All package errors derive from ``StepwellError`` so callers can catch one
type.  Errors that carry diagnostic payloads (best value so far, measured
validity margins) expose them as attributes.
"""

from __future__ import annotations


class StepwellError(Exception):
    """Base class for all package errors."""


class InvalidArgument(StepwellError, ValueError):
    """An argument is outside its documented domain."""


class DegenerateInput(StepwellError, ValueError):
    """Input is formally valid but makes the requested quantity undefined."""


class Singularity(StepwellError, ValueError):
    """Evaluation requested exactly at a singular point."""


class DomainError(StepwellError, ValueError):
    """A spatial coordinate lies outside the region a solution covers."""


class DomainOverrun(StepwellError, ValueError):
    """A computed trajectory or grid left the region it must stay inside."""


class AccuracyFailure(StepwellError, RuntimeError):
    """A quadrature did not reach its tolerance.

    Carries the best value obtained and the achieved error estimate.
    """

    def __init__(self, message: str, best_value=None, error_estimate=None):
        super().__init__(message)
        self.best_value = best_value
        self.error_estimate = error_estimate


class PreconditionViolation(StepwellError, RuntimeError):
    """An approximation was invoked outside its validity domain.

    ``margins`` maps each checked condition to its measured value.
    """

    def __init__(self, message: str, margins: dict | None = None):
        super().__init__(message)
        self.margins = dict(margins or {})


class ConfigError(StepwellError, ValueError):
    """A configuration file or CLI parameter set is invalid."""
