"""Exception hierarchy shared by every layer of the package."""


class ArtifactError(Exception):
    """Base class for all package errors."""


class PrecisionError(ArtifactError):
    """The working x-precision is too small for a stabilized answer."""


class PreconditionError(ArtifactError, ValueError):
    """An input violates the documented preconditions of an operation."""


class DefectError(ArtifactError, AssertionError):
    """Two independent computations disagree; indicates a bug, not bad input."""
