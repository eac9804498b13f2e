"""Exception types shared across the package."""


class HelirodError(Exception):
    """Base class for all package-specific errors."""


class GeometryError(HelirodError, ValueError):
    """Invalid tube geometry (a constructor bound was violated)."""


class ModelError(HelirodError, ValueError):
    """A model evaluation failed (singular tendon tangent, ill-conditioned system)."""


class SolverError(HelirodError, RuntimeError):
    """The shooting solver failed to converge.

    Attributes:
        residual_norm: best scaled residual achieved before giving up.
        iterations: Newton iterations spent in total.
        diagnostics: free-form dict with per-stage details.
    """

    def __init__(self, message, residual_norm=None, iterations=None, diagnostics=None):
        super().__init__(message)
        self.residual_norm = residual_norm
        self.iterations = iterations
        self.diagnostics = diagnostics or {}


class TrajectoryError(HelirodError, ValueError):
    """Degenerate or mismatched trajectory data."""


class PlanningError(HelirodError, RuntimeError):
    """Follow-the-leader planning failed.

    Attributes:
        diagnostics: per-tension evaluation log of the failed search.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class SceneError(HelirodError, ValueError):
    """Invalid phantom scene description."""
