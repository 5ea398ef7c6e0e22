"""Exception hierarchy shared by the library and the CLI."""


class AwtcError(Exception):
    """Base class for all errors raised by awtc_lab."""


class DomainError(AwtcError, ValueError):
    """An argument lies outside the domain of the operation."""


class ResourceError(AwtcError):
    """An exact/exhaustive computation would exceed a configured cap."""


class BudgetError(DomainError):
    """An error word exceeds the adversary's write budget."""


class FormatError(AwtcError, ValueError):
    """A codebook or config file is malformed."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
