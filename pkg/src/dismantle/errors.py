"""Exception hierarchy.

Every error raised by the package derives from :class:`DismantleError`. The
three intermediate classes map onto CLI exit codes (config 2, data 3,
numerical 4).
"""


class DismantleError(Exception):
    exit_code = 1


class ConfigError(DismantleError):
    exit_code = 2


class DataError(DismantleError):
    exit_code = 3


class NumericalError(DismantleError):
    exit_code = 4


class InvalidParam(ConfigError, ValueError):
    pass


class ParseError(DataError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmptyGraph(DataError):
    pass


class MissingEdge(DataError, KeyError):
    pass


class UnknownNode(DataError, KeyError):
    pass


class PlanMismatch(DataError):
    pass


class GenerationFailure(NumericalError):
    pass


class NumericalFailure(NumericalError):
    pass


class DegreeZero(NumericalError):
    pass


class DegenerateSplit(NumericalError):
    pass


class EmptySide(DataError, ValueError):
    pass


class ZeroAssoc(DataError, ValueError):
    pass


class ZeroBaseline(DataError, ZeroDivisionError):
    pass
