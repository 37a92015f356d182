"""
MomentLab errors.

Every failure the library raises derives from MomentLabError. Errors carry
the numeric evidence (margins, residuals, traces) as attributes so callers
can report it without parsing messages.
"""

from typing import Any, Dict, List, Optional, Sequence, Tuple


class MomentLabError(Exception):
    """Base class for all MomentLab errors."""

    pass


class ConfigError(MomentLabError):
    """Raised when an experiment configuration is invalid (usage error)."""

    pass


class GridMismatchError(MomentLabError):
    """Raised when operands live on different grids."""

    pass


class DegreeError(MomentLabError):
    """Raised when a form has the wrong degree for an operation."""

    pass


class NotExactError(MomentLabError):
    """Raised when a form that must be exact has a cohomological obstruction."""

    def __init__(self, message: str, offending: Optional[Dict[Tuple[int, ...], float]] = None):
        super().__init__(message)
        self.offending = dict(offending or {})


class NotClosedError(MomentLabError):
    """Raised when a 2-form that must be closed is not."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


class NotSymplecticError(MomentLabError):
    """Raised when a connection's curvature is degenerate somewhere on the grid."""

    def __init__(self, message: str, margin: float):
        super().__init__(message)
        self.margin = margin


class ProbeError(NotSymplecticError):
    """Raised when a finite-difference probe leaves the symplectic set."""

    pass


class CurvatureMismatchError(MomentLabError):
    """Raised when two connections that must share a curvature do not."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


class IdenticalConnectionsError(MomentLabError):
    """Raised when a separation witness is requested for equal connections."""

    pass


class SingularSystemError(MomentLabError):
    """Raised when a pointwise linear system cannot be solved."""

    pass


class TangencyError(MomentLabError):
    """Raised when a variation is not tangent to the required space."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


class KahlerConeError(MomentLabError):
    """Raised when a potential leaves the Kähler cone."""

    def __init__(self, message: str, margin: float):
        super().__init__(message)
        self.margin = margin


class StepSizeError(MomentLabError):
    """Raised when a flow step exceeds the explicit stability bound."""

    def __init__(self, message: str, dt: float, bound: float):
        super().__init__(message)
        self.dt = dt
        self.bound = bound


class FlowConvergenceError(MomentLabError):
    """Raised when the volume flow does not converge within its time budget."""

    def __init__(self, message: str, trace: Sequence[Any]):
        super().__init__(message)
        self.trace = list(trace)


class HolonomyError(MomentLabError):
    """Raised when a holonomy computation fails its scalar or stability checks."""

    def __init__(self, message: str, trace: Optional[List[Dict[str, Any]]] = None):
        super().__init__(message)
        self.trace = list(trace or [])


class PlotError(ConfigError):
    """Raised when a trace cannot be plotted (missing columns, empty file)."""

    def __init__(self, message: str, available: Sequence[str] = ()):
        super().__init__(message)
        self.available = list(available)
