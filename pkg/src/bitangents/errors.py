"""Exception hierarchy.

Everything raised for a bad or degenerate *input* derives from
:class:`DomainError`; the CLI maps those to exit status 1.  Schema and usage
problems derive from :class:`UsageError` (exit status 2).
"""


class BitangentError(Exception):
    """Root of all package errors."""


class DomainError(BitangentError):
    pass


class UsageError(BitangentError):
    pass


# exact field
class FieldMismatch(DomainError, TypeError):
    pass


class DivisionByZero(DomainError, ZeroDivisionError):
    pass


class InvalidEmbedding(DomainError, ValueError):
    pass


class NoSquareRoot(DomainError, ValueError):
    pass


class PrecisionExhausted(DomainError, ArithmeticError):
    """Numeric reconstruction was inconclusive; retry with more precision."""


# curve
class NotABitangent(DomainError, ValueError):
    pass


class HyperflexLine(NotABitangent):
    """The square part of F|_L has a double root (contact of order 4)."""


class NoSquareRootInField(NoSquareRoot):
    pass


# pairing / topology
class OnBranchLocus(DomainError):
    """Two lines meet at a point of the quartic."""


class Inconsistent(DomainError):
    pass


class DegenerateConfiguration(DomainError):
    pass


class MalformedMatrix(DomainError, ValueError):
    pass


class IdentityViolated(BitangentError, AssertionError):
    """An identity that must hold for any valid input failed: a bug, not bad data."""


# oracle
class ConvergenceShortfall(DomainError):
    def __init__(self, message, lines=None):
        super().__init__(message)
        self.lines = lines or []


class AmbiguousMatch(DomainError):
    pass


# io
class SchemaError(UsageError, ValueError):
    pass
