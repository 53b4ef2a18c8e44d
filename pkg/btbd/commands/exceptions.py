from btbd.core.exceptions import UsageError


class InvalidStepError(UsageError):
    """q must be odd, in the range 1..15."""


class MissingDimensionsError(UsageError):
    """Raw sequences need --width and --height."""


class InvalidOptionError(UsageError):
    """An option value is out of range."""
