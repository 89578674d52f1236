"""Exception hierarchy.

Everything numerical derives from :class:`NumericalError` so the CLI can map
it to exit code 3; bad inputs raise :class:`ValueError` subclasses.
"""


class NumericalError(ArithmeticError):
    """A computation failed to converge or hit a singularity."""


class DomainError(ValueError):
    """Argument outside the domain of the function."""


class BranchError(ValueError):
    """Point lies on the branch cut and no boundary side was given."""


class BesselEvaluationError(NumericalError):
    pass


class LimitDivergenceError(NumericalError):
    """A limit x -> 0 was detected to diverge."""


class LimitNonConvergenceError(NumericalError):
    pass


class DivergentIntegralError(NumericalError):
    pass


class QuadratureError(NumericalError):
    pass


class PoleError(NumericalError):
    """Evaluation point too close to a pole of a meromorphic function."""

    def __init__(self, message, nearest_eigenvalue=None):
        super().__init__(message)
        self.nearest_eigenvalue = nearest_eigenvalue


class DegenerateNormalizationError(NumericalError):
    pass


class BracketingError(NumericalError):
    pass


class ShootingError(NumericalError):
    pass
