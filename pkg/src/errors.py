from __future__ import annotations


class AlgebraError(Exception):
    """Base class for every error raised by the package."""


class InputError(AlgebraError, ValueError):
    """Inputs do not satisfy an operation's preconditions."""


class InvertibilityError(InputError):
    """An operator or form had to be inverted but is singular."""


class DocumentError(InputError):
    """A document could not be parsed or has ill-shaped content."""


class ResourceLimitError(AlgebraError):
    """Requested computation exceeds the desk-scale limits."""


class ConsistencyError(AlgebraError, RuntimeError):
    """Two independent computations of the same quantity disagreed."""
