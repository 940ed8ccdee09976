"""Exception types shared across the package."""


class QssimError(Exception):
    """Base class for all package errors."""


class InputError(QssimError, ValueError):
    """Invalid argument or malformed input data."""


class DimensionMismatchError(InputError):
    """Operands live on registers of different dimension or site count."""


class UnauthorizedSetError(InputError):
    """No logical operators exist for the requested player set."""


class UnsupportedError(QssimError):
    """Requested operation is outside what this implementation supports."""


class ResourceError(QssimError):
    """Dense representation would exceed the configured size cap."""


class NumericError(QssimError):
    """A numerically impossible branch was requested (e.g. zero-probability outcome)."""


class ReconstructionError(QssimError):
    """Too few shares to reconstruct a shared key."""


class ProtocolError(QssimError):
    """Protocol execution could not proceed (e.g. key reconstruction failed)."""


class RunawayError(ProtocolError):
    """An unbounded protocol exceeded its round cap."""
