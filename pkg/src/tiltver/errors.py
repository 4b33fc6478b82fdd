"""Exception hierarchy shared by every layer of the package."""

from __future__ import annotations


class TiltverError(Exception):
    """Base class for all errors raised by tiltver."""


class ShapeMismatch(TiltverError, ValueError):
    pass


class FieldMismatch(TiltverError, ValueError):
    pass


class ResourceBudgetError(TiltverError):
    """A computation would exceed the configured size or time budget."""


class DimensionCapError(ResourceBudgetError):
    def __init__(self, what: str, dim: int, cap: int):
        super().__init__(f"{what}: dimension {dim} exceeds cap {cap}")
        self.what = what
        self.dim = dim
        self.cap = cap


class NotBarInvariant(TiltverError, ValueError):
    pass


class NotTiltingCharacter(TiltverError, ValueError):
    pass


class NegativeCoefficients(TiltverError, ValueError):
    pass


class InconsistentPadicDimension(TiltverError, ValueError):
    pass


class NotAnEpimorphism(TiltverError, ValueError):
    pass


class PreconditionError(TiltverError, ValueError):
    pass


class InternalConsistencyError(TiltverError, AssertionError):
    """An identity that holds by theory failed; this signals a bug."""


class Inconclusive(TiltverError):
    """A randomized search exhausted its budget without a verdict."""

    def __init__(self, message: str, trials: list | None = None):
        super().__init__(message)
        self.trials = trials or []
