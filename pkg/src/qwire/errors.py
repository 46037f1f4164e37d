"""Exception types shared across the qwire modules."""


class QwireError(Exception):
    """Base class for all qwire errors."""


class DimensionMismatchError(QwireError):
    """Operands have incompatible dimensions."""


class DimensionTooSmallError(QwireError):
    """Requested dimension is below the minimum of 2."""


class NonHermitianInputError(QwireError):
    """An operation required a hermitian operator but got something else."""


class NotProportionalError(QwireError):
    """Two operators are not related by a scalar factor."""


class ZeroThetaError(QwireError):
    """The spectral-gap rate theta must be positive."""


class BadCouplingCountError(QwireError):
    """Coupling list length does not match the chain topology."""


class NotNormalizedError(QwireError):
    """A state vector does not have unit norm."""


class IndexOutOfRangeError(QwireError):
    """A site index lies outside the register or chain."""


class RegisterTooLargeError(QwireError):
    """Qubit register exceeds the dense-matrix size cap."""
