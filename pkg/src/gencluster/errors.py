"""Exception hierarchy for the generalized cluster algebra engine."""


class GCAError(Exception):
    """Base class for every error raised by this package."""


class InexactDivision(GCAError, ArithmeticError):
    pass


class MissingAssignment(GCAError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class Inhomogeneous(GCAError, ValueError):
    pass


class TermLimitExceeded(GCAError, MemoryError):
    pass


class NegativeCoefficient(GCAError, ValueError):
    pass


class NonPositiveInput(GCAError, ValueError):
    pass


class NotSkewSymmetrizable(GCAError, ValueError):
    pass


class BadExchangePoly(GCAError, ValueError):
    pass


class DimensionMismatch(GCAError, ValueError):
    pass


class NoIntegralRoot(GCAError, ValueError):
    pass


class RootUnavailable(GCAError, ValueError):
    pass


class NonMonomialTropicalImage(GCAError, ValueError):
    pass


class NonZeroZExponent(GCAError, ValueError):
    pass


class NormalizationViolated(GCAError, ValueError):
    pass


class ParseError(GCAError, ValueError):
    """Malformed input document; ``where`` names the offending line or field."""

    def __init__(self, message, where=None):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)
