"""Exception hierarchy shared by every d2dpl module."""


class D2dplError(Exception):
    """Base class for all library errors."""


class DeltaOutOfRange(D2dplError):
    """Stability exponent outside the range an operation supports.

    Independent-control formulas need delta = 2/alpha < 1; otherwise the
    aggregate interference has no finite fractional moment and the closed
    forms are meaningless.
    """


class AssumptionViolated(D2dplError):
    """An outage target exceeds 1 - 1/e, outside the fixed-power analysis."""


class MomentDiverges(D2dplError):
    """A required policy moment is infinite.

    Carries ``moment``, one of {"p_delta", "p_inv_h_delta", "mean"}.
    """

    def __init__(self, moment: str, message: str | None = None):
        self.moment = moment
        super().__init__(message or f"policy moment {moment!r} diverges")


class NumericFailure(D2dplError):
    """Quadrature or root bracketing failed to reach its tolerance.

    ``achieved`` holds the best error estimate that was reached.
    """

    def __init__(self, message: str, achieved: float | None = None):
        self.achieved = achieved
        super().__init__(message)


class InfeasibleDensities(D2dplError):
    """The density pair lies outside the feasibility region in force."""


class InvalidGrid(D2dplError):
    """Discretization grid violates its structural requirements."""


class InfeasibleDiscretization(D2dplError):
    """No strictly feasible starting point exists for the discretized program."""


class NonConvergence(D2dplError):
    """Iteration cap reached; ``best`` holds the last iterate, if any."""

    def __init__(self, message: str, best=None):
        self.best = best
        super().__init__(message)


class BoundViolation(D2dplError):
    """An analytic bound was contradicted by simulation beyond tolerance."""
