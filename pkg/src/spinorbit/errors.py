"""Exception types shared across the package."""

from .rmath import DomainError

__all__ = [
    "DomainError",
    "SingularMatrixError",
    "StepSizeError",
    "IntegrationBudgetError",
]


class SingularMatrixError(DomainError):
    """An interval matrix could not be inverted (0 in a pivot or determinant).

    For the interval Newton operator this signals "inconclusive on this box",
    not a verified negative.
    """


class StepSizeError(RuntimeError):
    """Rough-enclosure validation kept failing down to the minimum step."""


class IntegrationBudgetError(RuntimeError):
    """A section crossing was not certified within the step/time budget."""
