"""Exception types raised across the package."""


class AccelGeomError(Exception):
    """Base class for all package errors."""


class ConstructionError(AccelGeomError, ValueError):
    """An objective or system was built from invalid data."""


class DomainError(AccelGeomError, ValueError):
    """A point lies outside the region where an operation is defined."""


class UnsupportedOperation(AccelGeomError, TypeError):
    """The operation is not available for this kind of object."""


class SolverError(AccelGeomError, RuntimeError):
    """An inner iterative solver failed to reach its tolerance.

    Attributes
    ----------
    residual : float
        Norm of the residual at the last accepted iterate.
    iterations : int
        Number of Newton iterations performed.
    """

    def __init__(self, message, residual=float("nan"), iterations=0):
        super().__init__(f"{message} (residual={residual:.3e}, iterations={iterations})")
        self.residual = residual
        self.iterations = iterations


class DivergenceError(AccelGeomError, RuntimeError):
    """An integrator or iteration produced non-finite values."""

    def __init__(self, message, t=None):
        super().__init__(message if t is None else f"{message} at t={t:g}")
        self.t = t
