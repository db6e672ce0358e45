class PoshrinkBaseException(Exception):
    """Base class for all poshrink exceptions"""


class InvalidArgumentError(PoshrinkBaseException):
    pass


class DomainError(InvalidArgumentError):
    pass


class UnsupportedDimensionError(InvalidArgumentError):
    pass


class CostLimitError(InvalidArgumentError):
    pass


class NumericalError(PoshrinkBaseException):
    pass


class IntegrabilityError(NumericalError):
    pass


class SingularityError(NumericalError):
    pass
