"""Exception types shared across the package."""


class InvalidParameter(ValueError):
    """An argument is outside the domain an operation accepts."""


class ResourceLimit(RuntimeError):
    """A configured size cap would be exceeded.

    Raised instead of returning an answer that could be wrong or would take
    unbounded time to produce.
    """


class FormatError(ValueError):
    """A text artifact (graph file, atom dump, equation file) is malformed."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
