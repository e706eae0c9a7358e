"""Exception hierarchy shared by all modules.

CLI exit-code mapping: ConfigurationError (and subclasses) -> 2,
NumericalFailureError (and subclasses) -> 3, usage errors -> 1.
"""


class IA3Error(Exception):
    """Base class for all library errors."""


class InvalidInputError(IA3Error, ValueError):
    """Matrix input is empty, non-2D, or contains NaN/Inf entries."""


class DimensionMismatchError(IA3Error, ValueError):
    """Operands have incompatible shapes."""


class DegenerateSpanError(IA3Error, ValueError):
    """A span comparison was attempted on a rank-deficient matrix."""


class ConfigurationError(IA3Error, ValueError):
    """Problem dimensions violate the scheme's validity conditions."""


class FeasibilityError(ConfigurationError):
    """Not enough interference-free dimensions for the requested streams."""


class NumericalFailureError(IA3Error, RuntimeError):
    """A numerical routine failed to converge or produced unusable output."""


class DegenerateChannelError(NumericalFailureError):
    """A channel draw is numerically degenerate (rank-deficient where
    generic channels are full rank)."""
