"""Shared exception types."""

__all__ = ["ConsistencyError", "TraceBudgetExceeded"]


class ConsistencyError(RuntimeError):
    """An internal cross-check failed: two routes to the same quantity disagree,
    or a computed space has the wrong dimension.  Never caught and papered
    over; callers surface it (the command line maps it to exit code 2)."""


class TraceBudgetExceeded(RuntimeError):
    """A trace-formula computation would exceed the configured class number
    table or term budget.  Carries enough context to report which input was
    out of reach."""

    def __init__(self, message, *, k=None, N=None, n=None):
        super().__init__(message)
        self.k = k
        self.N = N
        self.n = n
