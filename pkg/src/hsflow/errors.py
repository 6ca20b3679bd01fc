"""Exception types shared across the package."""


class HsflowError(Exception):
    """Base class for all package errors."""


class SingularMatrix(HsflowError):
    """A matrix that must be inverted has (numerically) zero determinant."""


class NotPositive(HsflowError):
    """A positivity requirement failed (Gram matrix, metric, or volume density)."""


class DetNotOne(HsflowError):
    """An operation requiring a unit-determinant Gram matrix received something else."""


class StepRejected(HsflowError):
    """A time step left the positive cone; carries a suggested smaller dt."""

    def __init__(self, message, suggested_dt=None):
        super().__init__(message)
        self.suggested_dt = suggested_dt


class ValidationError(HsflowError):
    """Bad configuration or invalid initial data."""
