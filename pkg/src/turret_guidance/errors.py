"""Exception types shared across the library."""


class GuidanceError(Exception):
    """Base class for all turret-guidance errors."""


class InvalidConfigError(GuidanceError, ValueError):
    """A configuration value violates its documented range or schema."""


class NumericDomainError(GuidanceError, ValueError):
    """An input lies outside the numeric domain of an operation."""


class NoClosureError(GuidanceError, RuntimeError):
    """Closing speed is non-positive, so no intercept time exists."""


class TerminalPhase(GuidanceError):
    """Time-to-go fell below the guard value; hold the last command."""


class RunawayError(GuidanceError, RuntimeError):
    """Range grew past the runaway bound; carries the partial log."""

    def __init__(self, message, log=None):
        super().__init__(message)
        self.log = log
