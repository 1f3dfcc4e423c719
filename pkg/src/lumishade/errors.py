"""Domain exception hierarchy.

Every error raised by lumishade on bad input derives from LumishadeError,
so callers (and the CLI) can map domain failures to a single exit path.
"""


class LumishadeError(Exception):
    """Base class for all domain errors."""


class EmptyMaskError(LumishadeError):
    """A mask selects no pixels (or fewer than an operation's minimum)."""


class DimensionMismatchError(LumishadeError):
    """Image / mask / CDF dimensions do not agree."""


class EmptyInputError(LumishadeError):
    """An input collection that must be non-empty is empty."""


class OutOfRangeError(LumishadeError):
    """A scalar parameter is outside its documented range."""


class SizeTooSmallError(LumishadeError):
    """Requested canvas size is below the generator minimum."""


class NonUnitDirectionError(LumishadeError):
    """A light direction vector is not unit length."""


class EmptyPatternListError(LumishadeError):
    """Dataset synthesis was given no light patterns."""


class SingleClassDataError(LumishadeError):
    """Training data contains only one label."""


class TooFewGroupsError(LumishadeError):
    """Too few identity groups to split the dataset."""


class EmptyCatalogError(LumishadeError):
    """The shade catalog contains no shades."""


class NoForegroundError(LumishadeError):
    """Background removal left no foreground pixels."""


class NoInRangePixelsError(LumishadeError):
    """Color-range extraction left no pixels to cluster."""


class EmptyGroupError(LumishadeError):
    """A report group contains no estimates."""
