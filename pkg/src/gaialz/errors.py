"""Error taxonomy shared by all gaialz modules.

Every exception carries a stable ``code`` string that the CLI emits in its
machine-readable stderr line and maps to an exit code (validation errors
exit 2, runtime errors exit 3).
"""

__all__ = [
    "GaialzError",
    "ValidationError",
    "RuntimeFailure",
    "DuplicateOffset",
    "NonPositiveParameter",
    "RealityViolation",
    "DegenerateOffset",
    "DegenerateCrossing",
    "ShapeMismatch",
    "BranchTrackingFailure",
    "StepLimitExceeded",
    "NonHermitianInput",
    "ConditioningWarning",
]


class GaialzError(Exception):
    """Base class; ``code`` is the stable machine-readable identifier."""

    code = "Internal"


class ValidationError(GaialzError):
    """Rejected input (bad model file, degenerate structure). CLI exit 2."""

    code = "Validation"


class RuntimeFailure(GaialzError):
    """Computation could not be completed. CLI exit 3."""

    code = "Runtime"


class DuplicateOffset(ValidationError):
    """Equal band offsets produce a degenerate multi-point crossing."""

    code = "DuplicateOffset"


class NonPositiveParameter(ValidationError):
    """A parameter that must be positive (v, eta, N, ...) is not."""

    code = "NonPositiveParameter"


class RealityViolation(ValidationError):
    """Coupled pair with |a_i - a_j| >= 2: its gap never closes under the
    sinusoidal drive, so the impulse expansion does not apply."""

    code = "RealityViolation"


class DegenerateOffset(ValidationError):
    """A log|a_k - a_i| term in a non-local phase has argument zero."""

    code = "DegenerateOffset"


class DegenerateCrossing(ValidationError):
    """Coincident crossings of coupled pairs sharing a level."""

    code = "DegenerateCrossing"


class ShapeMismatch(ValidationError):
    """Model does not have the structure an operation requires."""

    code = "ShapeMismatch"


class BranchTrackingFailure(RuntimeFailure):
    """Instantaneous-eigenvalue ordering was ambiguous at a quadrature node."""

    code = "BranchTrackingFailure"


class StepLimitExceeded(RuntimeFailure):
    """Adaptive propagation hit its step budget before reaching the end."""

    code = "StepLimitExceeded"


class NonHermitianInput(ValidationError):
    """Hamiltonian evaluation returned a non-Hermitian matrix."""

    code = "NonHermitianInput"


class ConditioningWarning(UserWarning):
    """Non-fatal: the legacy product contains p^(-1/2) factors too large for
    reliable double-precision evaluation (some p < 1e-6)."""
