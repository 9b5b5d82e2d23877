"""Exception types shared across the package."""


class UnsupportedLengthError(ValueError):
    """Transform length outside the supported set {2**a * 3**b : b <= 1}."""


class KindMismatchError(ValueError):
    """A spectrum was handed to an operation expecting a different kind."""


class DomainError(ValueError):
    """Input violates an algebraic precondition (leading coefficient, order)."""


class PlanError(ValueError):
    """Block plan parameters violate the divisibility constraints."""


class FormatError(ValueError):
    """Malformed series file; carries the offending line number."""

    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line
