"""Exception types raised across the package."""


class SpikeSparseError(Exception):
    """Base class for all package-specific errors."""


class ZeroColumn(SpikeSparseError, ValueError):
    """A dictionary column has (numerically) zero norm and cannot be normalized."""

    def __init__(self, index: int):
        self.index = index
        super().__init__(f"column {index} has zero norm (below 1e-14)")


class InvalidDimensions(SpikeSparseError, ValueError):
    """Problem dimensions violate a precondition."""


class DimensionMismatch(SpikeSparseError, ValueError):
    """Operands have incompatible shapes."""


class NonFinite(SpikeSparseError, FloatingPointError):
    """A solver state entry became NaN or infinite."""


class ZeroSignal(SpikeSparseError, ValueError):
    """A relative quantity was requested against a zero-norm signal."""


class ZeroReference(SpikeSparseError, ValueError):
    """A comparison was requested against a zero-norm reference vector."""


class InsufficientData(SpikeSparseError, ValueError):
    """Too few usable samples for a fit."""


class Infeasible(SpikeSparseError, RuntimeError):
    """No enumerated support reproduces the signal within tolerance."""


class TooLarge(SpikeSparseError, ValueError):
    """Problem exceeds the exhaustive-enumeration regime."""


class MalformedFile(SpikeSparseError, ValueError):
    """A data file failed to parse or is missing required fields."""

    def __init__(self, path, detail: str):
        self.path = str(path)
        self.detail = detail
        super().__init__(f"{path}: {detail}")


class IllConditionedWarning(UserWarning):
    """A generated dictionary is numerically rank deficient."""


class StepSizeWarning(UserWarning):
    """A gradient step size lies outside the standard convergence range."""
