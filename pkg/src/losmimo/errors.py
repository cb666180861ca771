"""Exception hierarchy shared across the package."""


class LosMimoError(Exception):
    """Base class for all package errors."""


class DomainError(LosMimoError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ArgumentError(LosMimoError, ValueError):
    """Malformed or inconsistent arguments (sizes, enums, ordering)."""


class InvariantViolation(LosMimoError):
    """A matrix or sample failed a structural check (e.g. not Hermitian)."""


class AnalyticFormUnavailable(LosMimoError):
    """No closed form exists for this configuration; use the Monte Carlo route."""


class DegenerateConfigurationError(LosMimoError):
    """The requested ratio or statistic is undefined (zero denominator / variance)."""


class TaylorValidityError(LosMimoError):
    """The truncated Taylor expansion produced an inadmissible result.

    Raised when the third-order capacity expansion yields a negative variance;
    use ``MomentSource.MONTE_CARLO`` instead.
    """


class ResourceExhausted(LosMimoError):
    """A simulation ran out of memory; ``completed`` trials finished first."""

    def __init__(self, message: str, completed: int):
        super().__init__(f"{message} (completed {completed} trials)")
        self.completed = completed
