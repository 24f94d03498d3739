"""Exception hierarchy. Every error is a ``ValueError`` so callers can catch broadly."""


class FrameLabError(ValueError):
    """Base class for all validation failures raised by framelab."""


class InvalidInputError(FrameLabError):
    """Non-finite entries, wrong shapes, empty index sets and similar."""


class DimensionError(FrameLabError):
    """Operands whose dimensions do not match."""


class WeightError(FrameLabError):
    """A weight that is not a finite, strictly positive diagonal."""


class NotInSpanError(FrameLabError):
    """A vector that is not in the span of the frame."""


class GeometryError(FrameLabError):
    """The direct-sum condition between the target and sampling spaces fails."""


class ParseError(FrameLabError):
    """A malformed input file. ``location`` is a human readable position."""

    def __init__(self, message, location=None):
        self.location = location
        if location:
            message = f"{message} (at {location})"
        super().__init__(message)
