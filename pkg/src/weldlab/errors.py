"""Error taxonomy shared by all modules.

The CLI maps these onto exit codes: invalid input -> 2, resolution or
non-convergence -> 3, internal invariant breach -> 4.
"""


class WeldLabError(Exception):
    """Base class for all library errors."""


class InvalidInputError(WeldLabError):
    """Input violates a documented precondition (bad coefficients, |mu| >= 1, ...)."""


class ResolutionError(WeldLabError):
    """The requested quantity cannot be resolved at the current grid/truncation."""


class NonConvergenceError(WeldLabError):
    """An iterative solver failed to reach the requested tolerance."""

    def __init__(self, message, residual=None, iterations=None):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class InvalidResultError(WeldLabError):
    """A computed object violates an invariant (self-intersecting curve, ...)."""


class AmbiguousRankError(WeldLabError):
    """A singular value sits too close to the rank tolerance to decide."""
