"""Exception hierarchy.

Every error carries an optional ``payload`` dict with the numbers that made
the computation fail; the CLI serialises it next to the message.
"""


class EvenresError(Exception):
    exit_code = 3

    def __init__(self, message, **payload):
        super().__init__(message)
        self.payload = payload


class InputError(EvenresError, ValueError):
    exit_code = 2


class DomainError(InputError):
    """Argument outside the mathematical domain of an operation."""


class ConfigError(InputError):
    """Invalid run configuration; ``payload['field']`` holds the field path."""


class NumericError(EvenresError, ArithmeticError):
    exit_code = 3


class RangeError(NumericError):
    """Overflow/underflow of an intermediate quantity."""


class TruncationError(NumericError):
    """Mode sum did not converge within the allowed number of modes."""


class ContourError(NumericError):
    """Winding number could not be resolved to an integer."""


class BoxError(ContourError):
    """A zero sits on a search-box boundary even after perturbation."""


class QuadratureError(NumericError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class ConvergenceError(NumericError):
    """Newton polishing did not converge."""


class PoleError(NumericError):
    """Evaluation requested at a pole (e.g. of the sheet-shift Moebius map)."""
