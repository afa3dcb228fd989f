"""Exception types shared across the toolkit."""


class HampackError(Exception):
    """Base class for all toolkit errors."""


class ParseError(HampackError, ValueError):
    """A file does not match its expected schema."""


class InvalidQueryError(HampackError, ValueError):
    """A query violates an operation's precondition (bad subset size, even r, ...)."""


class InvalidInputError(HampackError, ValueError):
    """An input object violates a structural hypothesis (divisibility, degree, ...)."""


class SizeLimitError(HampackError, ValueError):
    """The instance is too large for an exhaustive/exact routine."""


class InvariantViolation(HampackError, RuntimeError):
    """An internal consistency check failed; indicates a bug or corrupt input."""
