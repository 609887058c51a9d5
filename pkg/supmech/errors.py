"""Error types raised by supmech.

Every error carries a ``code`` (the condition name used in reports and CLI
output) and a JSON-serialisable ``details`` dict.
"""

from __future__ import annotations

from typing import Any, Dict, Optional


class SupmechError(Exception):
    """Base class for all supmech errors."""

    code = "SupmechError"

    def __init__(self, message: str = "", details: Optional[Dict[str, Any]] = None):
        self.details: Dict[str, Any] = dict(details or {})
        super().__init__(message or self.code)

    def to_dict(self) -> dict:
        return {"error": self.code, "message": str(self), "details": self.details}


class AlgebraMismatch(SupmechError):
    code = "AlgebraMismatch"


class NoInnerDerivations(SupmechError):
    code = "NoInnerDerivations"


class NotInSpan(SupmechError):
    code = "NotInSpan"


class BasisMismatch(SupmechError):
    code = "BasisMismatch"


class DegreeZero(SupmechError):
    code = "DegreeZero"


class NotSpecial(SupmechError):
    code = "NotSpecial"


class NotIsomorphism(SupmechError):
    code = "NotIsomorphism"


class NonDegeneracyFailure(SupmechError):
    code = "NonDegeneracyFailure"


class NotUnique(SupmechError):
    code = "NotUnique"


class NotLieSubalgebra(SupmechError):
    code = "NotLieSubalgebra"


class UnsupportedForm(SupmechError):
    code = "UnsupportedForm"


class UnclassifiedWorld(SupmechError):
    code = "UnclassifiedWorld"


class ZeroParameter(SupmechError):
    code = "ZeroParameter"


class ForbiddenCoupling(SupmechError):
    code = "ForbiddenCoupling"


class StepTooLarge(SupmechError):
    code = "StepTooLarge"


class ConfigError(SupmechError):
    code = "ConfigError"


class SpecParseError(SupmechError):
    """A system spec failed to parse or validate."""

    code = "SpecParseError"

    def __init__(self, message: str, line: Optional[int] = None, field: Optional[str] = None):
        details: Dict[str, Any] = {}
        if line is not None:
            details["line"] = line
        if field is not None:
            details["field"] = field
        self.line = line
        self.field = field
        super().__init__(message, details)
