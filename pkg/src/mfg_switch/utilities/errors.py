"""Error types raised by the mfg-switch solver, flow and configuration layers."""

from typing import Any, Optional


class MfgSwitchError(Exception):
    """Base exception class for solver errors."""

    def __init__(self, message: str, original_error: Optional[Exception] = None):
        """Initialize the solver error.

        Args:
            message: The error message to display
            original_error: The original exception that caused this error, if any
        """
        super().__init__(message)
        self.original_error = original_error


class EmptyResult(MfgSwitchError):
    """No admissible node sequence connects the requested nodes."""


class BadInterval(MfgSwitchError):
    """An integration interval or profile partition is malformed."""


class DimensionMismatch(MfgSwitchError):
    """Two objects live on different networks or horizons."""


class InvalidMass(MfgSwitchError):
    """A mass value lies outside [0, total mass]."""


class NotAdmissible(MfgSwitchError):
    """A switch does not follow an edge of the visiting network."""


class BadTimes(MfgSwitchError):
    """Switching or decision instants are out of order or outside [0, T]."""


class InvalidTerminalState(MfgSwitchError):
    """A terminal cost was requested for a state that cannot end the game."""


class GridTooCoarse(MfgSwitchError):
    """The time grid does not resolve the blow-up of the switching cost."""


class BoundaryQuery(MfgSwitchError):
    """An argmin was requested at the target node or at the horizon."""


class DegenerateCost(MfgSwitchError):
    """A congestion average is zero where a positive one is required."""


class NotAPath(MfgSwitchError):
    """A node sequence is not an admissible switching path."""


class NonConvergence(MfgSwitchError):
    """A closed-form solution produced a non-finite value."""


class OutOfRange(MfgSwitchError):
    """A time lies outside [0, T] or off the expected grid."""


class PathExplosion(MfgSwitchError):
    """The number of ε-optimal paths exceeds the configured bound."""


class BadCoefficients(MfgSwitchError):
    """Decision coefficients are negative or do not sum to one."""


class BadSlope(MfgSwitchError):
    """A link slope is not strictly positive."""


class ParseError(MfgSwitchError):
    """A configuration document could not be read."""


class ConfigValidationError(MfgSwitchError):
    """A configuration document violates a field invariant."""

    def __init__(
        self,
        message: str,
        field: str = "",
        original_error: Optional[Exception] = None,
    ):
        super().__init__(message, original_error)
        self.field = field


class ErrorMessages:
    """Standardized error message templates."""

    NOT_DOMINATED: str = "Node {} does not dominate node {}: no admissible path"
    NOT_SUCCESSOR: str = "Node {} is not a successor of node {}"
    BAD_TIMES: str = "Expected 0 <= t < tau <= T, got t={}, tau={}, T={}"
    BAD_INTERVAL: str = "Invalid interval [{}, {}] on [0, {}]"
    INVALID_TERMINAL: str = "Node {} cannot end the game at t={} < T={}"
    MISMATCH: str = "Dimension mismatch: {} vs {}"
    BOUNDARY: str = "No switching decision at node {} and t={}"
    OFF_GRID: str = "Time {} is not a point of the grid with step {}"
    OUT_OF_RANGE: str = "Time {} lies outside [0, {}]"
    DEGENERATE: str = "Congestion average must be positive, got {}"
    GRID_TOO_COARSE: str = (
        "Grid step {} does not resolve the switching cost near t: "
        "value at node {} and t={} moved by {} under refinement"
    )
    PATH_EXPLOSION: str = "More than {} ε-optimal paths; raise max_paths or coarsen m"
    BAD_COEFFICIENTS: str = "Invalid coefficients at decision node ({}, {}): {}"
    BAD_SLOPE: str = "Link slopes must be strictly positive, got {}"
    NON_CONVERGENCE: str = "Chain solution failed between {} and {}: {}"
    INVALID_MASS: str = "Mass {} at {} is outside [0, {}]"

    @classmethod
    def format_error(cls, template: str, *args: Any) -> str:
        """Format an error message with the given template and arguments.

        Args:
            template: The error message template to use
            *args: The values to format into the template

        Returns:
            The formatted error message
        """
        return template.format(*args)
