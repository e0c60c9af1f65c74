"""
Error hierarchy for the supercalc library.

Every failure the library can report is a SuperCalcError carrying a ``kind``
(a stable machine-readable name) and an optional ``location`` naming the object
at fault, e.g. ``"M_0"`` or ``"q_1"``.
"""

from typing import Any, Dict, Optional


class SuperCalcError(Exception):
    """Base class for domain errors raised by supercalc."""

    kind = 'SuperCalcError'

    def __init__(self, message: str, location: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.location = location

    def to_json(self) -> Dict[str, Any]:
        """
        Machine-readable form written by the management commands.

        Returns:
            dict: error_kind, location and message
        """
        return {
            'error_kind': self.kind,
            'location': self.location,
            'message': self.message,
        }

    def at(self, location: str) -> 'SuperCalcError':
        """Attach a location if none is recorded yet and return self."""
        if self.location is None:
            self.location = location
        return self


class MalformedInput(SuperCalcError):
    kind = 'MalformedInput'


class GeneratorMismatch(SuperCalcError):
    kind = 'GeneratorMismatch'


class NotInvertible(SuperCalcError):
    kind = 'NotInvertible'


class MixedParity(SuperCalcError):
    kind = 'MixedParity'


class LayoutMismatch(SuperCalcError):
    kind = 'LayoutMismatch'


class NotSquare(SuperCalcError):
    kind = 'NotSquare'


class ParityViolation(SuperCalcError):
    kind = 'ParityViolation'


class SingularOddBlock(SuperCalcError):
    kind = 'SingularOddBlock'


class BodyRankDeficient(SuperCalcError):
    kind = 'BodyRankDeficient'


class NonInvertibleLeading(SuperCalcError):
    kind = 'NonInvertibleLeading'


class WrongWeight(SuperCalcError):
    kind = 'WrongWeight'


class EvaluationOutsideTruncation(SuperCalcError):
    kind = 'EvaluationOutsideTruncation'


class SingularEvaluation(SuperCalcError):
    kind = 'SingularEvaluation'


class NotSuperconformal(SuperCalcError):
    kind = 'NotSuperconformal'


class NotRamondSuperconformal(SuperCalcError):
    kind = 'NotRamondSuperconformal'


class InvalidCoordinateChange(SuperCalcError):
    kind = 'InvalidCoordinateChange'


class PreconditionViolated(SuperCalcError):
    kind = 'PreconditionViolated'


class DimensionMismatch(SuperCalcError):
    kind = 'DimensionMismatch'


class NonInvertibleNormalization(SuperCalcError):
    kind = 'NonInvertibleNormalization'
