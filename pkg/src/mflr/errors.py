"""Exception types shared across the package, mapped to CLI exit codes."""

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERICAL = 3


class MflrError(Exception):
    """Base class for all library errors."""


class DataError(MflrError):
    """Malformed, inconsistent, or out-of-range input data (exit code 2).

    ``code`` is a short stable identifier ("ragged-row", "non-finite", ...)
    so callers can dispatch without parsing the message.
    """

    def __init__(self, message, code="data"):
        super().__init__(message)
        self.code = code


class NumericalError(MflrError):
    """A numerical routine failed to produce a usable result (exit code 3)."""


class DegenerateBasisWarning(UserWarning):
    """A fitted basis collapsed to zero retained dimensions (mean-only model)."""
