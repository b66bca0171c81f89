"""Exception hierarchy shared by all modules."""


class PolystabError(ValueError):
    """Base class for validation failures (CLI exit code 2)."""


class DimensionMismatch(PolystabError):
    def __init__(self, left, right):
        super().__init__(f"dimension mismatch: {left} != {right}")
        self.left = left
        self.right = right


class NotSumZero(PolystabError):
    """A one-parameter subgroup whose coordinates do not sum to zero."""

    def __init__(self, total, message=None):
        super().__init__(message or f"one-parameter subgroup must sum to zero (sum={total})")
        self.total = total


class CapExceeded(PolystabError):
    """Requested size is beyond the configured computation cap."""

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class ZeroPolynomialError(PolystabError):
    pass
