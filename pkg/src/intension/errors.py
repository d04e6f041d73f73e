"""Exception hierarchy.

Every error raised by the package derives from :class:`IntensionError` so
callers (and the CLI) can catch the whole family at once.
"""


class IntensionError(ValueError):
    """Base class for data and contract violations."""


class DuplicateIndex(IntensionError):
    pass


class IndexOutOfRange(IntensionError):
    pass


class SpaceMismatch(IntensionError):
    pass


class TooManyFree(IntensionError):
    pass


class TooManyVariables(IntensionError):
    pass


class EmptyGoalSet(IntensionError):
    pass


class SampleTooLarge(IntensionError):
    pass


class BadWidth(IntensionError):
    pass


class BadPeriod(IntensionError):
    pass


class BadSpec(IntensionError):
    pass


class ExactnessInfeasible(IntensionError):
    """No sentence in the hypothesis language is exact on the sample."""


class EmptyEvalSet(IntensionError):
    pass


class MismatchedRuns(IntensionError):
    pass


class BadConfig(IntensionError):
    pass


class ParseError(IntensionError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
