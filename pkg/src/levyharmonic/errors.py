"""Exception types shared across the package."""


class InvalidParameterError(ValueError):
    """A parameter is outside its admissible domain."""


class QuadratureError(RuntimeError):
    """A quadrature did not converge within its budget.

    Carries the abscissa (or other offending input) when one is known.
    """

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point
