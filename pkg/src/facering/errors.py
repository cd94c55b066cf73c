"""Exception hierarchy shared across the package."""

from __future__ import annotations


class FaceRingError(Exception):
    """Base class for all errors raised by this package."""


class InputError(FaceRingError):
    """Malformed input document, schema violation, or invalid user data."""


class ParseError(InputError):
    """The input document could not be parsed."""


class AxiomViolation(InputError):
    """A simplicial poset axiom failed; carries the offending cell and axiom name."""

    def __init__(self, message: str, *, cell: str | None = None, axiom: str | None = None):
        super().__init__(message)
        self.cell = cell
        self.axiom = axiom


class CharacteristicFunctionError(InputError):
    """A vertex-to-vector assignment is not a valid characteristic function."""


class SearchExhausted(FaceRingError):
    """Randomized characteristic-function search ran out of attempts."""

    def __init__(self, message: str, *, attempts: int):
        super().__init__(message)
        self.attempts = attempts


class StraighteningLimit(FaceRingError):
    """Straightening exceeded its rewrite budget; indicates a bug or corrupt poset."""


class CertificationError(FaceRingError):
    """An exact computation contradicted a validated precondition."""
