"""
Exception hierarchy for omegapy.

Every error raised on purpose by the package derives from OmegaError, so
callers (and the command line) can catch the whole family at once.
"""


class OmegaError(Exception):
    """Base class for omegapy errors."""


class DomainError(OmegaError, ValueError):
    """An argument lies outside the domain of a function or operation."""


class PreconditionError(OmegaError, ValueError):
    """An operation was called with arguments it does not accept."""


class ConsistencyError(OmegaError, ArithmeticError):
    """Two independent computations of the same quantity disagree."""


class ConfigError(OmegaError, ValueError):
    """A run configuration violates its invariants."""
