"""Error hierarchy shared by the simulation modules and the CLI."""
from __future__ import annotations


class PulseControlError(RuntimeError):
    """Base class for all pulsecontrol failures.

    ``exit_code`` is the process exit status the CLI reports for the error.
    """

    exit_code: int = 2


class InvalidState(PulseControlError):
    """A density matrix violates Hermiticity, trace or positivity bounds."""


class NumericalFailure(PulseControlError):
    """An intermediate matrix left the positive semidefinite cone."""


class DomainError(PulseControlError):
    """An argument is outside the mathematical domain of an operation."""


class BadSupport(PulseControlError):
    """A coupling-function support is empty or reaches non-positive frequencies."""


class ShapeUnsupported(PulseControlError):
    """The requested closed form is only defined for another coupling shape."""


class DimensionCap(PulseControlError):
    """The oracle Hilbert space exceeds the configured dimension cap."""

    exit_code = 3


class TruncationOverflow(PulseControlError):
    """Population leaked into the top Fock level of a truncated mode."""

    exit_code = 3


class GridMismatch(PulseControlError):
    """Two traces were sampled on different time grids."""


class NoBracket(PulseControlError):
    """A refinement bracket does not enclose a local maximum."""


class ConfigError(PulseControlError):
    """A run configuration is malformed; the message names the key path."""


class ToleranceExceeded(PulseControlError):
    """An analytic/oracle comparison exceeded its tolerance."""

    exit_code = 4


__all__ = [
    "PulseControlError",
    "InvalidState",
    "NumericalFailure",
    "DomainError",
    "BadSupport",
    "ShapeUnsupported",
    "DimensionCap",
    "TruncationOverflow",
    "GridMismatch",
    "NoBracket",
    "ConfigError",
    "ToleranceExceeded",
]
