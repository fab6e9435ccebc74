"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input violates a documented precondition (bad player id, wrong
    game family, malformed structure, ...)."""


class ResourceLimitError(RuntimeError):
    """A configured size cap would be exceeded; the message names the cap."""
