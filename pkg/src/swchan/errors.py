"""Exception types raised by the swchan library.

Everything derives from :class:`SwchanError` so callers (notably the CLI)
can map library failures to a single exit path.
"""


class SwchanError(ValueError):
    """Base class for all swchan errors."""


class DistanceBelowReferenceError(SwchanError):
    """A distance below the model's reference distance d0 was supplied."""


class InvalidExtremaError(SwchanError):
    """Voltage extrema violate v_max >= v_min > 0."""


class BandMismatchError(SwchanError):
    """Carrier frequency falls outside an antenna's waveguide band."""


class DegenerateInputError(SwchanError):
    """Measurement set too small or distances not usable for a fit."""


class InsufficientExtremaError(SwchanError):
    """Fewer than two extrema available for period estimation."""


class InvalidGridError(SwchanError):
    """Distance grid specification produces an unusable sweep."""


class FileFormatError(SwchanError):
    """Malformed campaign CSV or report file.

    ``line`` is the 1-based line number of the offending row when known.
    """

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
