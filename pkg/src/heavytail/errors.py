"""Exception hierarchy.

Two families: :class:`InputError` for data or arguments that violate a
precondition, and :class:`NumericalError` for failures that happen while
iterating on otherwise valid input. The CLI maps them to exit codes 2 and 3.
"""


class HeavyTailError(Exception):
    """Base class for every error raised by this package."""


class InputError(HeavyTailError, ValueError):
    """Invalid input data or argument."""


class NumericalError(HeavyTailError, ArithmeticError):
    """A numerical procedure failed on valid input."""


class NotSymmetric(InputError):
    pass


class NotPositiveDefinite(NumericalError):
    pass


class DimensionMismatch(InputError):
    pass


class NonFiniteInput(InputError):
    pass


class DegenerateData(InputError):
    pass


class TooFewSamples(InputError):
    pass


class TailTooHeavy(InputError):
    """Requested quantity needs finite second moments (nu > 2)."""


class InvalidRho(InputError):
    pass


class InvalidTheta(InputError):
    pass


class BetaOutOfRange(InputError):
    pass


class ParseError(InputError):
    """CSV parse failure; ``row`` and ``col`` are 0-based line/field indices."""

    def __init__(self, message, row=None, col=None):
        super().__init__(message)
        self.row = row
        self.col = col


class NotConverged(NumericalError):
    """Iteration cap reached. ``diagnostics`` holds the last state."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class SingularIterate(NumericalError):
    pass


class DivergentIntegral(NumericalError):
    pass


class InconsistentForms(NumericalError):
    pass
