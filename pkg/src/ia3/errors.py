"""Exception and warning types raised across the package."""


class IAError(Exception):
    """Base class for all package errors."""


class DimensionMismatchError(IAError, ValueError):
    """Operands live in different ambient spaces or have incompatible shapes."""


class PreconditionError(IAError, ValueError):
    """An operation was called outside its documented domain."""


class DegeneracyError(IAError):
    """Channels failed a generic-position prediction (rank, kernel dimension,
    distinct eigenvalues)."""


class ChannelFileError(IAError, ValueError):
    """A channel or solution file could not be parsed."""


class InfeasibleError(IAError):
    """Alignment was requested for parameters that admit no solution.

    The ``certificate`` attribute carries the rank witness, when one was
    computed.
    """

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class DegeneracyWarning(UserWarning):
    """Issued when a computed dimension disagrees with the generic prediction."""
