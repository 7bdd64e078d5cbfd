"""Exception types raised by schneider_lab.

Every error derives from :class:`SchneiderError` (itself a ``ValueError``) so
callers can catch the whole family at once; the CLI maps them to exit code 2.
"""


class SchneiderError(ValueError):
    """Base class for all domain errors in this package."""


class NotPrime(SchneiderError):
    pass


class ZeroArgument(SchneiderError):
    pass


class NegativeValuation(SchneiderError):
    pass


class DenominatorDivisible(NegativeValuation):
    """p divides the denominator; for a reduced fraction this means v_p < 0."""


class NotAUnit(SchneiderError):
    pass


class PrimeMismatch(SchneiderError):
    pass


class NotInDomain(SchneiderError):
    """The rational is not in pZ_p (valuation < 1 or p divides the denominator)."""


class NotInPZp(SchneiderError):
    """A truncated p-adic integer has a nonzero constant digit."""


class EmptyInput(SchneiderError):
    pass


class InsufficientPrecision(SchneiderError):
    pass


class PrecisionExhaustedError(SchneiderError):
    pass


class BadAlpha(SchneiderError):
    pass


class BadLevels(SchneiderError):
    pass


class BadLevel(SchneiderError):
    pass


class UnspecifiedCase(SchneiderError):
    """A dimension query falls in a case that the underlying theorems leave open."""


class UnclassifiedPsi(SchneiderError):
    pass


class BudgetExceeded(SchneiderError):
    pass


class TooLarge(SchneiderError):
    """An enumeration would exceed the configured guard."""

    def __init__(self, count, guard):
        super().__init__(f"enumeration of {count} items exceeds guard {guard}")
        self.count = count
        self.guard = guard


class EmptyGrid(SchneiderError):
    pass
