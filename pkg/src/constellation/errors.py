"""Exception types shared across the package."""


class CapacityError(RuntimeError):
    """A computation would exceed the supported sieve range."""


class ToleranceNotMet(ArithmeticError):
    """A truncated product cannot certify the requested accuracy."""


class UndefinedRatio(ZeroDivisionError):
    """A PDF ratio was requested for a pattern with zero observed multiplets."""
