"""Exception types raised across the package.

``ConfigError`` subclasses mean the caller asked for something invalid;
``DataError`` subclasses mean the input data could not be used. The CLI maps
them to exit codes 1 and 2 respectively.
"""


class InvregError(Exception):
    pass


class ConfigError(InvregError, ValueError):
    pass


class DataError(InvregError, ValueError):
    pass


class NumericalError(InvregError, ArithmeticError):
    pass


class DenominatorTooSmall(NumericalError):
    """Sherman-Morrison denominator vanished; the updated matrix is singular."""


class NegativeProjection(NumericalError):
    """``u.c`` came out clearly negative, so H and H+ are inconsistent."""


class ZeroTruth(NumericalError):
    pass


class SingularSystem(NumericalError):
    pass


class DimensionMismatch(ConfigError):
    pass


class BadHyperparameter(ConfigError):
    pass


class UnstableSegment(ConfigError):
    pass


class EmptyHistory(DataError):
    pass


class SeriesTooShort(DataError):
    pass


class ParseError(DataError):
    def __init__(self, message, row=None):
        super().__init__(message)
        self.row = row


class EmptyColumn(DataError):
    pass
