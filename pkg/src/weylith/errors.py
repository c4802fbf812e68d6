"""Exception hierarchy shared by all weylith modules."""


class WeylithError(Exception):
    """Base class for every error raised by weylith."""


class InvalidInputError(WeylithError, ValueError):
    pass


class ParseError(InvalidInputError):
    pass


class WindowTooNarrowError(WeylithError):
    pass


class RegularityError(WeylithError):
    """The supplied regularity bound failed the exactness check."""

    def __init__(self, degree: int, message: str | None = None):
        self.degree = degree
        super().__init__(message or f"BGG complex of M_{{>=r}} is not exact at p={degree}")


class ExcludedCaseError(InvalidInputError):
    """ell outside 1 <= ell <= dim W - 1, where the Weyman construction is not available."""


class CorruptedSegmentError(WeylithError):
    pass


class InvariantViolation(WeylithError):
    pass
