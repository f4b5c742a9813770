"""Exception types shared across the package.

Plain ``ValueError`` is used for bad arguments (wrong ranges, mismatched
dimensions, malformed files).  The classes here cover the remaining failure
modes that callers may want to handle separately.
"""


class QpadError(Exception):
    """Base class for package-specific failures."""


class ResourceLimitError(QpadError):
    """An operation would materialize something too large for desk scale."""


class EigensolverError(QpadError):
    """The Jacobi sweep did not reach the requested off-diagonal mass."""


class InvalidStateError(QpadError):
    """A quantum state violates a structural requirement of the operation."""
