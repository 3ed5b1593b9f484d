"""Exception types shared across the package."""


class AntlabError(Exception):
    """Base class for all package errors."""


class CapacityError(AntlabError):
    """A requested computation exceeds the configured work or memory budget."""


class DomainError(AntlabError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class PreconditionError(AntlabError, ValueError):
    """Inputs violate a documented precondition."""
