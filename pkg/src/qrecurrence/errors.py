"""Exception types shared across the package."""


class PreconditionError(ValueError):
    """An input violates the documented preconditions of an operation."""


class VerificationError(RuntimeError):
    """A constructed object failed its own independent re-check.

    Raised when an internal invariant is violated; seeing one means a bug.
    """


class NormalizationWarning(UserWarning):
    """A state or ensemble was renormalized on construction."""
