"""
Exception hierarchy shared by every app.

Library code raises these; the management commands translate them into
exit codes (see core.commands).
"""


class FreeGroupError(Exception):
    """Base class for all errors raised by this project."""


class InputError(FreeGroupError, ValueError):
    """Malformed words, files or parameters, or a value outside a domain."""


class InvalidMeasureError(InputError):
    """A rational function that cannot be the measure of a set."""


class ExactArithmeticError(FreeGroupError, ArithmeticError):
    """Exact arithmetic failed (division by zero function, degenerate substitution)."""


class EvaluationError(ExactArithmeticError):
    """Evaluation or expansion at a pole."""


class SingularMatrixError(ExactArithmeticError):
    """A pivot minor vanished during elimination."""


class ResourceError(FreeGroupError):
    """A configured budget (enumeration cap, ball size) would be exceeded."""


class InvariantViolation(FreeGroupError):
    """An internal consistency check failed."""
