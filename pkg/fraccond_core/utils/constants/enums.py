from enum import Enum


class ConstructionMode(Enum):
    BOUNDED = "bounded"
    SCALED = "scaled"


class ReportStatus(Enum):
    VALID = "VALID"
    DEGENERATE = "DEGENERATE"
    INVALID = "INVALID"


class CliCommand(Enum):
    CONSTRUCT = "construct"
    VERIFY = "verify"
    SWEEP = "sweep"
    ORACLE_CHECK = "oracle-check"
    EXPORT = "export"


class ExportTarget(Enum):
    DN = "dn"
    FIELD = "field"
    STUDY = "study"


class CheckOutcome(Enum):
    PASS = "PASS"
    FAIL = "FAIL"
