"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: configuration problems exit 1,
file problems exit 2, numerical failures exit 3.
"""


class PhaseconError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(PhaseconError):
    """Invalid or inconsistent run configuration."""


class ImageIOError(PhaseconError):
    """Unreadable, unwritable, or unsupported image file."""


class NumericalError(PhaseconError):
    """A computation cannot proceed on the given data (e.g. determinant
    criteria on a non-square map)."""
