"""Exception hierarchy shared by every module."""


class NcStarError(Exception):
    """Base class for all library errors."""


class InputError(NcStarError, ValueError):
    """Malformed or inconsistent input (unknown ids, bad intervals, ...)."""


class DomainError(NcStarError, ValueError):
    """Valid input outside the domain where an operation is defined."""


class BudgetError(NcStarError, RuntimeError):
    """An enumeration would exceed its configured element budget."""

    def __init__(self, message, bound=None):
        super().__init__(message)
        self.bound = bound


class InsufficientResolution(NcStarError):
    """The requested object does not exist at the current grid resolution or depth."""

    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required
