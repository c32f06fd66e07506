"""Exception hierarchy shared by the library and the CLI."""


class EfimovError(Exception):
    """Base class for all package errors."""


class ValidationError(EfimovError, ValueError):
    """Invalid configuration or argument."""


class DomainError(ValidationError):
    """Argument outside the domain where a quantity is defined."""


class ModeError(ValidationError):
    """Operation requested in a mode where it is undefined (e.g. infinite a_AA)."""


class NumericalError(EfimovError, RuntimeError):
    """A numerical procedure failed (bracketing, convergence, accuracy)."""


class ConvergenceError(NumericalError):
    pass


class AccuracyWarning(UserWarning):
    """Estimated discretization error exceeds the requested tolerance."""
