"""Exception types shared across the package."""

from __future__ import annotations


class ChfifError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(ChfifError):
    """Raised when a model is built from data that fails validation.

    Carries the individual violations so callers can report them all.
    """

    def __init__(self, violations):
        self.violations = tuple(violations)
        lines = "; ".join(str(v) for v in self.violations)
        super().__init__(f"invalid interpolation problem: {lines}")


class DepthLimitError(ChfifError):
    """Requested refinement depth exceeds the configured memory budget."""


class SamplingTooCoarseError(ChfifError):
    """Sample grid is too coarse for the requested box size."""


class InsufficientScalesError(ChfifError):
    """Too few usable scales for a log-log regression."""


class DegenerateExponentError(ChfifError):
    """A classification formula produced an exponent outside (0, 1]."""


class ConfigError(ChfifError):
    """Configuration text failed to parse or validate.

    ``where`` is a dotted path (or ``line N``) locating the offending field.
    """

    def __init__(self, where: str, message: str):
        self.where = where
        super().__init__(f"{where}: {message}")
