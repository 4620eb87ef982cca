"""Exception types shared across the package."""


class DerhamError(Exception):
    """Base class for all package errors."""


class DomainError(DerhamError, ValueError):
    """Input outside the mathematical domain of an operation."""


class ConvergenceError(DerhamError, RuntimeError):
    """Fixed-point iteration failed to reach tolerance within the cap."""


class ResourceLimitError(DerhamError, RuntimeError):
    """A grid or table would exceed the configured size cap."""


class SpecParseError(DerhamError, ValueError):
    """A system spec document is malformed."""


class SystemValidationError(DerhamError):
    """A parsed system failed validation; carries the report."""

    def __init__(self, report, message=None):
        if message is None:
            message = getattr(report, "summary", lambda: str(report))()
        super().__init__(message)
        self.report = report
