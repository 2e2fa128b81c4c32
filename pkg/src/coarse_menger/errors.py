"""Exception types shared across the library."""


class CoarseMengerError(Exception):
    """Base class for all library errors."""


class InputError(CoarseMengerError):
    """Malformed or out-of-contract input (unknown vertex, empty set, ...)."""


class CapacityError(CoarseMengerError):
    """An exact computation was requested above the configured desk-scale cap."""

    def __init__(self, message: str, cap=None, actual=None):
        super().__init__(message)
        self.cap = cap
        self.actual = actual


class PreconditionError(CoarseMengerError):
    """A documented precondition of an operation is violated.

    ``detail`` carries a machine-readable description of the offending object.
    """

    def __init__(self, message: str, detail=None):
        super().__init__(message)
        self.detail = detail


class InternalInconsistencyError(CoarseMengerError):
    """A case that the underlying mathematics rules out was reached.

    Never absorbed silently: reaching this is a reportable bug either in the
    solver or in the caller's certified preconditions.
    """
