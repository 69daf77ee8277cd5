"""Exception types shared across the package."""


class NormcastError(Exception):
    """Base class for all normcast errors."""


class NotFoundError(NormcastError):
    """A user or element id is not registered in the matrix."""


class DimensionMismatchError(NormcastError):
    """Two profiles do not cover the same element set."""


class NoCommonElementsError(NormcastError):
    """Separation is undefined: the users share no commonly known elements."""


class NoSimilarUsersError(NormcastError):
    """No candidate neighbor survives the eligibility filters."""


class EmptySampleError(NormcastError):
    """A statistic was requested over an empty sample."""


class InvalidConfidenceError(NormcastError):
    """Confidence value outside [0, 1]."""


class MissingConfidenceError(NormcastError):
    """The threshold policy needs a confidence the prediction does not carry."""


class OutOfScaleError(NormcastError):
    """An answer falls outside the declared input scale."""


class ParseError(NormcastError):
    """Malformed input file; carries the offending line number when known."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class DuplicateEntryError(NormcastError):
    """The same (user, element) pair appears more than once in the input."""


class InvalidSpecError(NormcastError):
    """Synthetic cohort parameters are inconsistent."""


class InvalidSplitError(NormcastError):
    """The requested test/pool split cannot be formed."""


class UndefinedCorrelationError(NormcastError):
    """Rank correlation is undefined (constant input or too few points)."""
