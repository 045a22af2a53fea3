"""Exception types raised across the package."""


class FirelikError(Exception):
    """Base class for all package errors."""


class BoundsError(FirelikError, IndexError):
    """A point or index falls outside the grid."""


class ParameterError(FirelikError, ValueError):
    """An input parameter violates its documented range."""


class CoverageError(FirelikError):
    """A detection pixel has no grid node within the kernel radius."""
