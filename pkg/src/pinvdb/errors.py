"""Exception hierarchy.

Every error carries a stable ``code`` (the class name) that the HTTP service
and the CLI report verbatim.
"""


class PinvError(Exception):
    """Base class for all errors raised by pinvdb."""

    @property
    def code(self):
        return type(self).__name__


# -- core-matrix -----------------------------------------------------------

class ParseError(PinvError, ValueError):
    pass


class RaggedRows(ParseError):
    pass


class EmptyInput(ParseError):
    pass


class NonFiniteValue(PinvError, ValueError):
    pass


class LengthMismatch(PinvError, ValueError):
    pass


class IndexOutOfRange(PinvError, ValueError):
    pass


class DimensionMismatch(PinvError, ValueError):
    pass


class NonSquarePower(DimensionMismatch):
    pass


# -- pinv-engine -----------------------------------------------------------

class NotSquare(DimensionMismatch):
    pass


class NotSymmetric(PinvError, ValueError):
    pass


class NotPositiveDefinite(PinvError, ValueError):
    pass


class WeightNotPD(NotPositiveDefinite):
    """A weight matrix failed the symmetric positive definite check."""


class SingularDelta(PinvError, ArithmeticError):
    pass


class SingularMatrix(PinvError, ArithmeticError):
    pass


# -- matrix-store ----------------------------------------------------------

class StoreUnavailable(PinvError, OSError):
    pass


class DuplicateMatrix(PinvError):
    pass


class DuplicateResult(PinvError):
    pass


class CorruptRecord(PinvError):
    pass


class RecordTooLong(PinvError, ValueError):
    pass


# -- compute-pipeline ------------------------------------------------------

class UnknownOperation(PinvError, ValueError):
    pass


class ArityMismatch(PinvError, ValueError):
    pass


class UnknownTestMatrix(PinvError, LookupError):
    pass


class UnknownId(PinvError, LookupError):
    pass


class EmptyUpload(PinvError, ValueError):
    pass
