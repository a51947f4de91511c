"""Shared exception types.

ValueError subclasses reject bad inputs; NumericalFailure subclasses signal
that a computation ran but did not certify (the CLI maps them to exit code 2).
"""


class NumericalFailure(RuntimeError):
    """A solver ran but failed to produce a certified result."""


class ConvergenceError(NumericalFailure):
    """Iteration cap reached before the requested tolerance."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class DiscretizationError(NumericalFailure):
    """A discrete result violates a structural property the continuum guarantees."""


class SupercriticalError(NumericalFailure):
    """No positive solution regime: complex exponents / indefinite operator."""


class DegenerateWeightError(ValueError):
    """The curvature weight vanishes identically on the domain."""


class InfiniteDiameterError(ValueError):
    """Conformal factor too singular: the transformed tip distance diverges."""


class SupersolutionError(ValueError):
    """Initial guess is not a discrete supersolution."""

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node
