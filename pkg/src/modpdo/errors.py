"""Exception types shared across the package."""


class GridMismatchError(ValueError):
    """Operands live on incompatible grids or algebra dimensions."""


class ResolutionError(ValueError):
    """The requested operation cannot be resolved on the given grid."""


class InvalidInputError(ValueError):
    """Malformed input data (non-finite entries, bad shapes, bad tags)."""


class ConvergenceError(RuntimeError):
    """A regularized limit failed to converge within tolerance.

    Carries the trace of successive estimates so callers can report
    diagnostics instead of crashing.
    """

    def __init__(self, message, eps_trace=None):
        super().__init__(message)
        self.eps_trace = list(eps_trace) if eps_trace is not None else []


class ConfigError(ValueError):
    """Invalid scenario configuration (maps to CLI usage errors)."""
