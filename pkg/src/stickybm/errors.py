"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where a formula is defined."""


class SupportError(DomainError):
    """A law was queried outside ``0 <= l/theta <= tau <= t``."""


class NumericalError(ArithmeticError):
    """A numerical routine failed to reach its accepted tolerance.

    ``achieved`` carries the routine's own error estimate when one exists.
    """

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class ResourceError(RuntimeError):
    """A simulated path was too short for the requested horizon."""
