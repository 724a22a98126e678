"""Exception types shared across the package."""


class InvalidParameterError(ValueError):
    """An input value violates a documented precondition or invariant."""


class DataFormatError(ValueError):
    """An input file does not match its documented schema."""


class MissingArtifactError(RuntimeError):
    """A pipeline stage was asked to reuse an artifact that does not exist."""
