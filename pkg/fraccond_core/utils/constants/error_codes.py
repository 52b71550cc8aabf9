from enum import Enum


class NumericsErrorCodes(Enum):
    HANDLED = "FC400"
    INVALID_ARGUMENT = "FC401"
    PRECONDITION_VIOLATION = "FC402"
    CONSTRUCTION_INFEASIBLE = "FC403"
    UNSUPPORTED_CONFIGURATION = "FC404"
    GRID_TOO_COARSE = "FC405"
    CONFIG_VALIDATION = "FC406"
    UNHANDLED = "FC500"
    ASSEMBLY = "FC501"
    NUMERICAL_BREAKDOWN = "FC502"
    CONSTRUCTION_FAILED = "FC503"
    FAMILY_INFEASIBLE = "FC504"
    STUDY_FAILED = "FC505"


class ExitCodes(Enum):
    SUCCESS = 0
    CHECKS_FAILED = 1
    HANDLED_ERROR = 2
    UNHANDLED_ERROR = 3
