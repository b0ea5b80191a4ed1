"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of a function."""


class ValidationError(ValueError):
    """An object fails a structural or membership check."""


class PreconditionError(ValueError):
    """A closed-form formula is used outside its certified range."""
