"""Exception types shared across the package.

All domain failures derive from :class:`MvfError`; plain ``OSError`` is left
alone so callers can distinguish bad data (exit code 1) from I/O trouble
(exit code 2).
"""


class MvfError(Exception):
    """Base class for all domain errors raised by this package."""


class FormatError(MvfError):
    """A file exists and is readable but its contents are malformed."""


class ValidationError(MvfError):
    """A value or invariant check failed (bad argument, bad range, ...)."""


class TrainingError(MvfError):
    """Model training could not proceed (e.g. a starved label cell)."""


class EvaluationError(MvfError):
    """Scoring could not proceed (e.g. no voiced frames to score)."""
