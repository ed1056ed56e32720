"""Exception types shared across the package."""

__all__ = ["UsageError", "NumericalError", "VerificationError"]


class UsageError(ValueError):
    """Invalid arguments or option combinations supplied by the caller."""


class NumericalError(RuntimeError):
    """A numerical routine could not produce a trustworthy result
    (basis collapse, non-terminating series, violated invariants, ...)."""


class VerificationError(RuntimeError):
    """A cross-check between independent computation routes failed."""
