"""Exception hierarchy.

Everything derives from :class:`BSymbolError`.  :class:`ParameterError`
covers inputs that describe no valid code (the CLI maps these to exit
code 2); :class:`BudgetExceededError` is kept apart so callers can tell a
refused workload from a bad parameter set.
"""


class BSymbolError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(BSymbolError, ValueError):
    """Inputs do not describe a valid field, code, or regime."""


class NonPrimePError(ParameterError):
    pass


class DegreeMismatchError(ParameterError):
    pass


class NonPrimitivePolynomialError(ParameterError):
    pass


class NonDivisorError(ParameterError):
    pass


class NotCoprimeError(ParameterError):
    pass


class OrderMismatchError(ParameterError):
    pass


class DegenerateLengthError(ParameterError):
    """Code length n = 1 leaves no admissible window size b."""


class NotSemiprimitiveError(ParameterError):
    pass


class ParityError(ParameterError):
    pass


class UNotOneError(ParameterError):
    pass


class BOutOfRangeError(BSymbolError, ValueError):
    pass


class LengthMismatchError(BSymbolError, ValueError):
    pass


class ZeroElementError(BSymbolError, ValueError):
    pass


class CardinalityError(BSymbolError, AssertionError):
    """A constructed set has the wrong size; indicates a table bug."""


class NonIntegralWeightError(BSymbolError, ArithmeticError):
    """A closed-form quantity that must be an integer is not."""


class BudgetExceededError(BSymbolError):
    pass
