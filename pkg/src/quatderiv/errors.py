"""Exception hierarchy shared by every module of the package."""


class QuatDerivError(Exception):
    """Base class for all package errors."""


class DomainError(QuatDerivError, ValueError):
    """An argument lies outside the domain where the operation is defined."""


class ShapeError(QuatDerivError, ValueError):
    """Matrix shapes do not conform."""


class SingularError(QuatDerivError, ArithmeticError):
    """A matrix is numerically singular.

    Attributes
    ----------
    cond : float
        Estimated condition number (``inf`` when not available).
    """

    def __init__(self, message, cond=float("inf")):
        super().__init__(message)
        self.cond = cond


class ConvergenceError(QuatDerivError, ArithmeticError):
    """An iterative or series computation did not converge."""


class StructureError(QuatDerivError, ValueError):
    """A complex matrix lacks the block symmetry of a quaternion adjoint."""


class EvalError(QuatDerivError, RuntimeError):
    """A black-box function raised while being probed."""


class RankError(QuatDerivError, ValueError):
    """Not enough independent probes to identify derivative blocks."""


class HermitianError(QuatDerivError, ValueError):
    """A Hermitian-only formula received a non-Hermitian matrix."""


class DivergenceError(QuatDerivError, RuntimeError):
    """An iteration kept increasing its objective."""
