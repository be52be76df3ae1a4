"""Exception types raised by the numerical routines."""


class DomainError(ValueError):
    """An input lies outside the domain of the operation."""


class PoleError(ZeroDivisionError):
    """A rational step hit a zero denominator."""


class SingularStepError(ZeroDivisionError):
    """A Newton-type step divided by a vanishing (modified) derivative."""


class EstimationError(ValueError):
    """Not enough usable data to estimate a convergence order."""
