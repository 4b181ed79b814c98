"""Exception hierarchy shared by every module."""


class PlliError(Exception):
    """Base class for all errors raised by plli."""


class ValidationError(PlliError, ValueError):
    """Input data or configuration is malformed."""


class EmptyTable(ValidationError):
    pass


class MissingTargetColumn(ValidationError):
    pass


class NonFiniteValue(ValidationError):
    def __init__(self, row, col):
        super().__init__(f"non-finite value at row {row}, column {col!r}")
        self.row = row
        self.col = col


class DimensionMismatch(ValidationError):
    pass


class EmptyRegion(ValidationError):
    pass


class EmptyCentroidList(ValidationError):
    pass


class IndexOutOfRange(ValidationError, IndexError):
    pass


class InvertedRange(ValidationError):
    pass


class InsufficientData(ValidationError):
    pass


class KTooLarge(ValidationError):
    pass


class TooLargeForOracle(ValidationError):
    pass


class TooFewPoints(ValidationError):
    pass


class InconsistentTables(PlliError):
    pass


class NumericalFailure(PlliError, ArithmeticError):
    pass
