"""Exception hierarchy shared by all bellband modules."""


class BellbandError(Exception):
    """Base class for all errors raised by bellband."""


class WavelengthRangeError(BellbandError, ValueError):
    """Wavelength outside the validity range of a dispersion model."""


class PhaseMatchingError(BellbandError):
    """No phase-matching solution exists for the requested configuration."""


class ConfigurationError(BellbandError, ValueError):
    """A setup or run configuration violates one of its invariants."""


class ModePointError(BellbandError, ValueError):
    """An emission-mode point lies outside the validity guard of the expansions."""


class ResolutionError(BellbandError, ValueError):
    """A sampling grid is too coarse for the requested operation."""


class UndefinedVisibilityError(BellbandError):
    """Fringe visibility is undefined (for example on an all-zero curve)."""


class DegenerateFitError(BellbandError):
    """The least-squares normal matrix is singular; parameters are not identifiable."""


class CurveFormatError(BellbandError, ValueError):
    """A curve file cannot be parsed or fails validation."""


class UsageError(BellbandError):
    """Bad command-line usage (unknown flag, malformed value, missing argument)."""
