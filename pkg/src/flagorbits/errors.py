"""Exception hierarchy.

Every error raised for a mathematically invalid request derives from
``DomainError``; malformed input text derives from ``ParseError``.  The CLI
maps the first family to exit code 2 and the second to exit code 1.
"""


class DomainError(Exception):
    pass


class ParseError(ValueError):
    pass


# exact field
class DivisionByZero(DomainError, ZeroDivisionError):
    pass


class TowerMismatch(DomainError):
    pass


class NotReal(DomainError):
    pass


class NotPositive(DomainError):
    pass


# linear algebra
class AmbientMismatch(DomainError):
    pass


class FormUnavailable(DomainError):
    pass


class Singular(DomainError):
    pass


class InvalidSetup(DomainError):
    pass


# clans
class OutOfRange(DomainError):
    pass


class UnsignedClan(DomainError):
    pass


class InvalidParam(DomainError):
    pass


# classification
class DimensionMismatch(DomainError):
    pass


class NotIsotropic(DomainError):
    pass


class ClassificationInconsistent(DomainError):
    pass


class NotInIntersection(DomainError):
    pass


class NegativePivot(DomainError):
    pass


class InvalidDualBasis(DomainError):
    pass


# inductive limits
class UnalignedWindow(DomainError):
    pass


class HorizonExceeded(DomainError):
    pass


class Undecidable(DomainError):
    pass
