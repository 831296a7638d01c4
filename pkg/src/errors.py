"""
errors.py
---------
Exception hierarchy shared by the library, the CLI and the HTTP layer.

ValidationError subclasses describe bad input (CLI exit 2, HTTP 422).
NumericalError subclasses describe failures of the mathematics itself
(CLI exit 3, HTTP 500).
"""

from __future__ import annotations


class PVarError(Exception):
    """Base class for every error raised by the library."""


# ---------------------------------------------------------------------
# Input validation
# ---------------------------------------------------------------------
class ValidationError(PVarError):
    pass


class ConfigError(ValidationError):
    pass


class ConstraintViolation(ValidationError):
    pass


class IncompatibleRepr(ValidationError):
    pass


class InvalidBounds(ValidationError):
    pass


class DuplicateNodes(ValidationError):
    pass


class ParseError(ValidationError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DuplicateX(ParseError):
    pass


class NotOrthogonal(ValidationError):
    pass


# ---------------------------------------------------------------------
# Numerical failures
# ---------------------------------------------------------------------
class NumericalError(PVarError):
    pass


class DivergentMoment(NumericalError):
    pass


class NegativeVariance(NumericalError):
    pass


class DegenerateVariance(NumericalError):
    pass


class DegenerateBasis(NumericalError):
    def __init__(self, message: str, index: int | None = None):
        self.index = index
        super().__init__(message)


class InconsistentSystem(NumericalError):
    pass


class RankDeficient(NumericalError):
    pass


class SingularModifiedSystem(NumericalError):
    def __init__(self, message: str, free_directions: list | None = None):
        self.free_directions = free_directions or []
        super().__init__(message)


class PoleInLowerParams(NumericalError):
    pass
