"""Exception hierarchy.

Every error raised for bad user input derives from :class:`QBakerError`, which
is itself a ``ValueError`` so callers that only care about "bad input" can
catch the builtin.
"""


class QBakerError(ValueError):
    """Base class for invalid-input errors raised by qbaker."""


class InvalidDimensionError(QBakerError):
    pass


class InvalidInputError(QBakerError):
    pass


class InvalidParameterError(QBakerError):
    pass


class NonCoprimeError(QBakerError):
    pass


class SpecInconsistencyError(QBakerError):
    pass


class DimensionMismatchError(QBakerError):
    pass


class NonUnitaryError(QBakerError):
    def __init__(self, residual, tol):
        self.residual = residual
        self.tol = tol
        super().__init__(
            f"matrix is not unitary: ||U^dag U - I||_F = {residual:.3e} exceeds {tol:.3e}"
        )


class FormatError(QBakerError):
    """Malformed CMAT / STATE / CSV input."""
