from typing import Any, Dict, Optional

from fraccond_core.utils.constants.error_codes import NumericsErrorCodes


class HandledNumericsError(Exception):
    """Base class for errors caused by the caller's input or geometry."""

    error_code: str = NumericsErrorCodes.HANDLED.value
    error_type: str = "HANDLED_NUMERICS_ERROR"
    error_subtype: Optional[str] = None

    def __init__(self, message: str, **details: Any) -> None:
        self.message = message
        self.details: Dict[str, Any] = details
        super().__init__(self.message)


class UnhandledNumericsError(Exception):
    """Base class for failures inside the numerical pipeline."""

    error_code: str = NumericsErrorCodes.UNHANDLED.value
    error_type: str = "UNHANDLED_NUMERICS_ERROR"
    error_subtype: Optional[str] = None

    def __init__(self, message: str, **details: Any) -> None:
        self.message = message
        self.details: Dict[str, Any] = details
        super().__init__(self.message)


class InvalidArgumentError(HandledNumericsError):
    error_subtype: str = "INVALID_ARGUMENT"
    error_code: str = NumericsErrorCodes.INVALID_ARGUMENT.value


class PreconditionViolationError(HandledNumericsError):
    error_subtype: str = "PRECONDITION_VIOLATION"
    error_code: str = NumericsErrorCodes.PRECONDITION_VIOLATION.value


class ConstructionInfeasibleError(HandledNumericsError):
    error_subtype: str = "CONSTRUCTION_INFEASIBLE"
    error_code: str = NumericsErrorCodes.CONSTRUCTION_INFEASIBLE.value


class UnsupportedConfigurationError(HandledNumericsError):
    error_subtype: str = "UNSUPPORTED_CONFIGURATION"
    error_code: str = NumericsErrorCodes.UNSUPPORTED_CONFIGURATION.value


class GridTooCoarseError(HandledNumericsError):
    """Raised when a window contains no complete hat function.

    Attributes:
        required_spacing -- the largest grid spacing that would place a hat inside the window
    """

    error_subtype: str = "GRID_TOO_COARSE"
    error_code: str = NumericsErrorCodes.GRID_TOO_COARSE.value

    def __init__(self, message: str, required_spacing: float, **details: Any) -> None:
        self.required_spacing = required_spacing
        super().__init__(message, required_spacing=required_spacing, **details)


class ConfigValidationError(HandledNumericsError):
    """Raised for unreadable or invalid run configurations.

    Attributes:
        line -- 1-based line of a parse error, when known
    """

    error_subtype: str = "CONFIG_VALIDATION"
    error_code: str = NumericsErrorCodes.CONFIG_VALIDATION.value

    def __init__(self, message: str, line: Optional[int] = None, **details: Any) -> None:
        self.line = line
        super().__init__(message, line=line, **details)


class AssemblyError(UnhandledNumericsError):
    error_subtype: str = "ASSEMBLY_ERROR"
    error_code: str = NumericsErrorCodes.ASSEMBLY.value


class NumericalBreakdownError(UnhandledNumericsError):
    """Raised when a factorization fails or a solve leaves a large residual.

    Attributes:
        condition_estimate -- ratio of extreme eigenvalues of the factored block
    """

    error_subtype: str = "NUMERICAL_BREAKDOWN"
    error_code: str = NumericsErrorCodes.NUMERICAL_BREAKDOWN.value

    def __init__(self, message: str, condition_estimate: Optional[float] = None, **details: Any) -> None:
        self.condition_estimate = condition_estimate
        super().__init__(message, condition_estimate=condition_estimate, **details)


class ConstructionFailedError(UnhandledNumericsError):
    error_subtype: str = "CONSTRUCTION_FAILED"
    error_code: str = NumericsErrorCodes.CONSTRUCTION_FAILED.value


class FamilyInfeasibleError(UnhandledNumericsError):
    """Raised when the potential term makes the interior block indefinite.

    Attributes:
        min_eigenvalue -- smallest eigenvalue of the interior block of (A - M_q)
    """

    error_subtype: str = "FAMILY_INFEASIBLE"
    error_code: str = NumericsErrorCodes.FAMILY_INFEASIBLE.value

    def __init__(self, message: str, min_eigenvalue: float, **details: Any) -> None:
        self.min_eigenvalue = min_eigenvalue
        super().__init__(message, min_eigenvalue=min_eigenvalue, **details)


class StudyFailedError(UnhandledNumericsError):
    error_subtype: str = "STUDY_FAILED"
    error_code: str = NumericsErrorCodes.STUDY_FAILED.value
